# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Exact evaluation and exhaustive search of hat-guessing strategies."""

__version__ = "0.1.0"
