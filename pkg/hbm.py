import sys

from modules.cli.manager import main

if __name__ == "__main__":
    sys.exit(main())
