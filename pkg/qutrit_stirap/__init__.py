"""
qutrit-stirap: coherent population transfer in ladder-type superconducting qutrits.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Final

#: Console script and log prefix.
APP_NAME: Final = "qutrit-stirap"

try:
    from ._version import __version__
except ImportError:
    # source checkout without a build; hatch-vcs writes _version.py on install
    __version__ = "0.0.0"

#: Version recorded in result sidecars.
APP_VERSION: Final = __version__
