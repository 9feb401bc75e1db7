# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Allows ``python -m hatlab``."""

from hatlab.cli import main

if __name__ == "__main__":
    main()
