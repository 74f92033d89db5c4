"""cutcalc: exact workbench for cut-sequence DGAs, bar constructions,
parametrized algebraic cycles, and numeric period evaluation."""

__version__ = "0.1.0"
