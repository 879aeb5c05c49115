"""
KernelLab main entry point for python -m KernelLab
"""

from KernelLab.cli import main

if __name__ == '__main__':
    import sys
    sys.exit(main())
