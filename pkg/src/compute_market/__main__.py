"""Allow running as `python -m compute_market`."""

from compute_market.cli.app import main

main()
