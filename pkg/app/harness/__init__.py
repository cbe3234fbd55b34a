"""File formats, annotation parsers, the geometry property suite and the command line."""
