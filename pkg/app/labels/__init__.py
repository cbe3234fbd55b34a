"""Ground-truth generation: full mask, central mask, ratio map and training mask."""
