'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''


class TCLabError(Exception):
    '''base class for all errors raised by the library'''


class ValidationError(TCLabError, ValueError):
    '''an input was rejected (shape, grid, range, or domain mismatch)'''


class PositivityError(ValidationError):
    '''a multiplicative step factor of the price or volatility tree is not
       strictly positive. The offending step (1-based) is kept on the error.
    '''

    def __init__(self, step, factor, name="S"):
        self.step = step
        self.factor = factor
        self.name = name
        message = "step factor of %s at step %s is %s, must be positive"
        super(PositivityError, self).__init__(message % (name, step, factor))


class IncompleteMarketError(ValidationError):
    '''a tree node has two identical successor prices, so the replication
       system at that node is singular
    '''


class ResourceLimitError(TCLabError):
    '''a configured enumeration or state-space cap would be exceeded'''
