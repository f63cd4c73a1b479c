"""
Output file digests and the run manifest.

Every file a command writes is listed in manifest.json with its SHA-256,
so two runs over the same input can be compared byte for byte.
"""
import hashlib
import hmac
import json
import logging
from pathlib import Path
from typing import Dict, Iterable

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_CHUNK = 1 << 16


def digest_file(path: Path) -> str:
    """
    Hash a file using SHA-256.
    
    Args:
        path: File to hash
        
    Returns:
        str: Hexadecimal digest of the file contents
    """
    sha = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(_CHUNK), b""):
            sha.update(chunk)
    return sha.hexdigest()


def write_manifest(out_dir: Path, files: Iterable[Path]) -> Path:
    """
    Write manifest.json mapping each file name (relative to out_dir) to its digest.
    
    Returns:
        Path: Location of the manifest
    """
    out_dir = Path(out_dir)
    entries: Dict[str, str] = {
        Path(path).relative_to(out_dir).as_posix(): digest_file(path)
        for path in sorted(Path(p) for p in files)
    }
    target = out_dir / MANIFEST_NAME
    target.write_text(json.dumps({"files": entries}, indent=2, sort_keys=True) + "\n")
    logger.info("manifest: %d files in %s", len(entries), out_dir)
    return target


def verify_manifest(out_dir: Path) -> Dict[str, bool]:
    """
    Re-hash every file named in an existing manifest.
    
    Uses constant-time comparison of digests.
    
    Returns:
        dict: file name -> whether its current digest matches
    """
    out_dir = Path(out_dir)
    entries = json.loads((out_dir / MANIFEST_NAME).read_text())["files"]
    results = {}
    for name, expected in entries.items():
        path = out_dir / name
        results[name] = path.is_file() and hmac.compare_digest(digest_file(path), expected)
    return results
