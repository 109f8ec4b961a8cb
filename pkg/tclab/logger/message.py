'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import os
import sys

ABORT = -5
CRITICAL = -4
ERROR = -3
WARNING = -2
LOG = -1
INFO = 1
CUSTOM = 1
QUIET = 0
VERBOSE = VERBOSE1 = 2
VERBOSE2 = 3
VERBOSE3 = 4
DEBUG = 5

LEVELS = {"ABORT": ABORT,
          "CRITICAL": CRITICAL,
          "ERROR": ERROR,
          "WARNING": WARNING,
          "LOG": LOG,
          "INFO": INFO,
          "QUIET": QUIET,
          "VERBOSE": VERBOSE,
          "VERBOSE1": VERBOSE1,
          "VERBOSE2": VERBOSE2,
          "VERBOSE3": VERBOSE3,
          "DEBUG": DEBUG}

PURPLE = "\033[95m"
YELLOW = "\033[93m"
RED = "\033[91m"
DARKRED = "\033[31m"
CYAN = "\033[36m"
OFF = "\033[0m"

# Everything but plain output goes to stderr, so csv/json on stdout stays clean
STDOUT_LEVELS = (LOG, INFO)


class TCLabMessage:

    def __init__(self, level=None):
        if level is None:
            level = get_logging_level()
        self.level = level
        self.history = []
        self.colorize = self.useColor()
        self.colors = {ABORT: DARKRED,
                       CRITICAL: RED,
                       ERROR: RED,
                       WARNING: YELLOW,
                       LOG: PURPLE,
                       CUSTOM: PURPLE,
                       DEBUG: CYAN}

    # Streams are looked up on every write, callers may swap sys.stdout

    @property
    def errorStream(self):
        return sys.stderr

    @property
    def outputStream(self):
        return sys.stdout

    # Colors --------------------------------------------

    def useColor(self):
        '''useColor will determine if color should be added to a print.
           TCLAB_COLORIZE wins if set, otherwise both streams must be a tty.
        '''
        preference = get_user_color_preference()
        if preference is not None:
            return preference
        for stream in (self.errorStream, self.outputStream):
            if not getattr(stream, 'isatty', lambda: False)():
                return False
        return True

    def addColor(self, level, text):
        '''addColor to the prompt (usually prefix) if terminal
           supports, and specified to do so'''
        if self.colorize and level in self.colors:
            return "%s%s%s" % (self.colors[level], text, OFF)
        return text

    def isEnabledFor(self, messageLevel):
        return messageLevel <= self.level

    def emit(self, level, message, prefix=None, color=None):
        '''emit is the main function to print the message
           optionally with a prefix

           Parameters
           ==========
           level: the level of the message
           message: the message to print
           prefix: a prefix for the message
           color: the color lookup key, defaults to the level
        '''
        if color is None:
            color = level

        message = str(message)
        if prefix is not None:
            message = "%s%s" % (self.addColor(color, "%s " % prefix), message)
        else:
            message = self.addColor(color, message)

        if not message.endswith('\n'):
            message = "%s\n" % message

        if self.level != QUIET and self.isEnabledFor(level):
            stream = self.errorStream
            if level in STDOUT_LEVELS:
                stream = self.outputStream
            self.write(stream, message)

        self.history.append(message)

    def write(self, stream, message):
        if isinstance(message, bytes):
            message = message.decode('utf-8')
        stream.write(message)

    def get_logs(self, join_newline=True):
        '''get_logs will return the complete history, joined by newline
           (default) or as is.
        '''
        if join_newline:
            return '\n'.join(self.history)
        return self.history

    def show_progress(self,
                      iteration,
                      total,
                      length=40,
                      min_level=VERBOSE,
                      prefix=None,
                      carriage_return=True,
                      suffix='',
                      symbol="="):
        '''create a terminal progress bar on stderr, shown for verbose+

           Parameters
           ==========
           iteration: current iteration (Int)
           total: total iterations (Int)
           length: character length of bar (Int)
        '''
        if self.level == QUIET or self.level < min_level or total <= 0:
            return

        percent = min(100.0, 100 * (iteration / float(total)))
        progress = min(length, int(length * iteration // total))
        prefix = prefix or 'Progress'

        if progress < length:
            bar = symbol * progress + '|' + '-' * (length - progress - 1)
        else:
            bar = symbol * length

        output = '\r%s |%s| %5.1f%% %s' % (prefix, bar, percent, suffix)
        self.errorStream.write(output)
        if iteration >= total and carriage_return:
            self.errorStream.write('\n')
        self.errorStream.flush()

    # Logging ------------------------------------------

    def abort(self, message):
        self.emit(ABORT, message, 'ABORT')

    def critical(self, message):
        self.emit(CRITICAL, message, 'CRITICAL')

    def error(self, message):
        self.emit(ERROR, message, 'ERROR')

    def exit(self, message, return_code=1):
        self.emit(ERROR, message, 'ERROR')
        sys.exit(return_code)

    def warning(self, message):
        self.emit(WARNING, message, 'WARNING')

    def log(self, message):
        self.emit(LOG, message, 'LOG')

    def custom(self, prefix, message="", color=PURPLE):
        self.emit(CUSTOM, message, prefix, color)

    def info(self, message):
        self.emit(INFO, message)

    def newline(self):
        return self.info("")

    def verbose(self, message):
        self.emit(VERBOSE, message, "VERBOSE")

    def verbose1(self, message):
        self.emit(VERBOSE, message, "VERBOSE1")

    def verbose2(self, message):
        self.emit(VERBOSE2, message, 'VERBOSE2')

    def verbose3(self, message):
        self.emit(VERBOSE3, message, 'VERBOSE3')

    def debug(self, message):
        self.emit(DEBUG, message, 'DEBUG')

    def is_quiet(self):
        '''is_quiet returns true if nothing below errors should be shown
        '''
        return self.level < INFO

    # Terminal ------------------------------------------

    def table(self, rows, col_width=2):
        '''table will print a table of entries. A pandas DataFrame prints
           with its column names as a header row, a dictionary uses keys
           as row labels, and anything else gets a numbered list.
        '''
        if hasattr(rows, "columns") and hasattr(rows, "itertuples"):
            header = [str(c) for c in rows.columns]
            body = [[format_cell(v) for v in row]
                    for row in rows.itertuples(index=False)]
            widths = [max(len(x) for x in column)
                      for column in zip(header, *body)]
            for row in [header] + body:
                self.info("  ".join(x.rjust(w) for x, w in zip(row, widths)))
            return

        labels = [str(x) for x in range(1, len(rows) + 1)]
        if isinstance(rows, dict):
            labels = [str(x) for x in rows.keys()]
            rows = list(rows.values())

        for label, row in zip(labels, rows):
            if isinstance(row, (list, tuple)):
                row = "\t".join(format_cell(x) for x in row)
            self.custom(prefix=label.ljust(col_width), message=row)


def format_cell(value):
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def get_logging_level():
    '''get_logging_level will configure a logging to standard out based on
       the user's selected level, which should be in an environment
       variable called MESSAGELEVEL. Names (DEBUG, QUIET, ...) and integers
       are both understood. If MESSAGELEVEL is not set, INFO is assumed.
    '''
    level = os.environ.get("MESSAGELEVEL", INFO)
    if isinstance(level, int):
        return level

    level = level.strip().upper()
    try:
        return int(level)
    except ValueError:
        pass

    if level.startswith("VERBOSE") and level not in LEVELS:
        return VERBOSE3
    return LEVELS.get(level, INFO)


def get_user_color_preference():
    preference = os.environ.get('TCLAB_COLORIZE', None)
    if preference is not None:
        preference = preference.lower() in ("yes", "true", "t", "1", "y")
    return preference


bot = TCLabMessage()
