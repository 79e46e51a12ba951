"""Median quasi-Monte Carlo integration with random digital nets."""
