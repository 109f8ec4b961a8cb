'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.logger import bot
from .fileio import print_json


def highlight_json(text):
    '''highlight_json colors a json string for a terminal with pygments.
       Without color support the text comes back untouched.
    '''
    if not bot.colorize:
        return text

    from pygments import highlight
    from pygments.formatters import TerminalFormatter
    from pygments.lexers import JsonLexer
    return highlight(text, JsonLexer(), TerminalFormatter()).rstrip("\n")


def show_json(json_obj):
    '''show_json pretty prints a json object to the terminal (stdout),
       unless the client is quiet
    '''
    if bot.is_quiet():
        return
    bot.info(highlight_json(print_json(json_obj)))
