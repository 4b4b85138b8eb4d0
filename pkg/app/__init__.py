"""Fisher-information and AsV-efficiency analysis of phase-modulated sensor networks."""
