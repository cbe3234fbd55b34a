"""Polygon/grid bridge: rasterization, components, contour tracing and distance transforms."""
