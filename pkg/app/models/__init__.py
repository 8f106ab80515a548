"""Algebraic models: the prime field, O(n,n;t) and vector fields."""
