"""Test suite for cartan-ho-lab."""
