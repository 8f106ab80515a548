"""Core settings, domain errors and logging setup."""
