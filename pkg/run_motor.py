#!/usr/bin/env python3
"""
Simple launcher for the MOTOR command-line interface

This script can be run from the project root without installing the package.
Usage: python3 run_motor.py rerank INDEX_DIR QUERIES
"""
import sys

from cli.cli import main

if __name__ == "__main__":
    sys.exit(main())
