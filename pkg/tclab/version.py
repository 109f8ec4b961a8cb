'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

__version__ = "0.1.0"
AUTHOR = 'The tclab Developers'
AUTHOR_EMAIL = 'tclab-dev@users.noreply.github.com'
NAME = 'tclab'
PACKAGE_URL = "http://www.github.com/tclab/tclab"
KEYWORDS = 'transaction costs utility maximization scenario tree dynamic programming'
DESCRIPTION = "Numerical laboratory for utility maximization under proportional transaction costs"
LICENSE = "LICENSE"

# Version of the json documents written by the client
SCHEMA_VERSION = "1.0"

################################################################################
# Global requirements


INSTALL_REQUIRES = (
    ('numpy', {'min_version': '1.17.0'}),
    ('scipy', {'min_version': '1.3.0'}),
    ('pandas', {'min_version': '0.25.0'}),
    ('pygments', {'min_version': '2.1.3'}),
)

TESTS_REQUIRES = (
    ('pytest', {'min_version': '4.6.2'}),
)
