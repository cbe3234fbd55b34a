"""Stand-in network outputs and deterministic synthetic scenes."""
