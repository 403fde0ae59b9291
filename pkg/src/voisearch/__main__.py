from voisearch.cli import main
import sys

sys.exit(main())
