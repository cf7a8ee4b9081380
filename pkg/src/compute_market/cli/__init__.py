"""CLI commands for compute-market."""
