"""
Exact verifier for the two-category of algebras up to inner automorphism,
its interval counterpart, and a desk-scale fermionic quantization between them.
"""
__version__ = "0.3.0"
