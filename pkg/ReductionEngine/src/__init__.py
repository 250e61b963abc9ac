"""Library code of the reduction engine."""
