"""Allow ``python -m src``."""

from .cli import main

raise SystemExit(main())
