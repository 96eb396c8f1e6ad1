"""Linear branching programs over F2, directional affine extractors and Res[+] proofs."""

__version__ = "0.1.0"
