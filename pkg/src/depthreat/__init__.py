"""depthreat: reconstruct what any historical dependency manifest would have
installed, which of those versions were vulnerable, how threatening each
vulnerability was at that instant, and who is responsible for the high-threat
exposures."""

__version__ = "0.1.0"
