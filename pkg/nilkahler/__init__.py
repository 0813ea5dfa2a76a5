"""Exact invariant complex geometry on nilmanifolds."""
