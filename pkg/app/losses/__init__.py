"""Loss terms as pure array functions, with analytic gradients for parity checks."""
