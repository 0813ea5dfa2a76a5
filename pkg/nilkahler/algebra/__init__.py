"""Scalars, invariant forms, exact linear algebra and verdicts."""
