"""Command-line subcommands, one module per pipeline stage."""
