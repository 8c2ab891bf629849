# erlaubt: python -m core eigs …
import sys

from core.magkon_main import main

sys.exit(main())
