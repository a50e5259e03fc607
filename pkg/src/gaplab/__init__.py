"""gaplab: a desk-scale lab for UNMT training-vs-inference data-gap experiments."""

__version__ = "0.1.0"
