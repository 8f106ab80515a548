"""Engine services: linear algebra, graded subspaces, HO, derivations."""
