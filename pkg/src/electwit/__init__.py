"""Bi-level election analytics over archived tweet corpora.

The package ingests archived JSON Lines tweet corpora plus candidate and
party metadata, and provides:

* party mention extraction and share computation (``mentions``),
* lexicon-based sentiment and moral-foundation scoring (``lexicon``),
* candidate availability/activeness time series (``temporal``),
* Mann-Whitney profile comparisons and scaling (``stats``),
* five text feature families and six from-scratch classifiers with
  cross-validated tuning and F1 reporting (``features``, ``ml``),
* a CLI emitting plot-ready CSV reports (``cli``) and a synthetic corpus
  generator for desk-scale verification (``synth``).

Hot numeric loops (decision-tree split search, SMO sweeps) live in
``electwit.kernels``, backed by a compiled extension when available and a
pure NumPy fallback otherwise.
"""

from electwit.errors import DataError, LoadError, NoDataError

__version__ = "0.1.0"

__all__ = ["DataError", "LoadError", "NoDataError", "__version__"]
