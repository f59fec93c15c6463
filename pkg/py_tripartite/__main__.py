import sys

from py_tripartite.cli import main

if __name__ == '__main__':
    sys.exit(main())
