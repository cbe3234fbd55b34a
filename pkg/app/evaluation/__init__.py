"""IoU-based one-to-one matching and precision / recall / F-measure."""
