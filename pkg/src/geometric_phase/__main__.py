#!/usr/bin/env python3
"""Allow running geometric_phase as a module: python -m geometric_phase"""
from geometric_phase.cli import app

if __name__ == "__main__":
    app()
