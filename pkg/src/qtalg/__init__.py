"""qtalg: exact computations with quantum tori, their weight modules,
double affine Hecke operators, q-difference normal forms and finite
group character data."""

__version__ = "0.1.0"
