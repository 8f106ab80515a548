"""Command-line subcommands, registered on the group in ``app.main``."""
