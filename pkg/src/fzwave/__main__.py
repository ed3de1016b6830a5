"""Allow ``python -m fzwave`` as an alias for the ``fzwave`` script."""

from .cli import main

main()
