"""Tool layer: one module per CLI subcommand, each exposing `register_commands`."""
