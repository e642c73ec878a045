"""Helper scripts for reproducing experiments."""
