'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import errno
import json
import os

from tclab.logger import bot


################################################################################
## FOLDER OPERATIONS ###########################################################
################################################################################


def mkdir_p(path):
    '''mkdir_p attempts to get the same functionality as mkdir -p. Unlike
       a plain makedirs, an existing directory is not an error.

       Parameters
       ==========
       path: the path to create.
    '''
    try:
        os.makedirs(path)
    except OSError as e:
        if e.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise


def ensure_parent(filename):
    '''create the parent folder of filename if it does not exist yet'''
    parent = os.path.dirname(os.path.abspath(filename))
    mkdir_p(parent)
    return filename


################################################################################
## FILE OPERATIONS #############################################################
################################################################################


def write_file(filename, content, mode="w"):
    '''write_file will open a file, "filename" and write content, "content"
       and properly close the file
    '''
    ensure_parent(filename)
    with open(filename, mode) as filey:
        filey.writelines(content)
    return filename


def write_json(json_obj, filename, mode="w", print_pretty=True):
    '''write_json will (optionally,pretty print) a json object to file.
       Keys are sorted so that identical objects give identical bytes.

       Parameters
       ==========
       json_obj: the dict to print to json
       filename: the output file to write to
       print_pretty: if True, will use nicer formatting
    '''
    ensure_parent(filename)
    if print_pretty:
        content = print_json(json_obj)
    else:
        content = json.dumps(json_obj, sort_keys=True)

    # content is complete before the file is opened
    with open(filename, mode) as filey:
        filey.writelines(content + "\n")
    return filename


def print_json(json_obj):
    ''' just dump the json in a "pretty print" format
    '''
    return json.dumps(json_obj,
                      indent=4,
                      sort_keys=True,
                      separators=(',', ': '))


def write_csv(frame, filename, float_format=None):
    '''write a pandas DataFrame without its index. Column order is the
       order of the frame, and floats use one fixed format.

       Parameters
       ==========
       frame: the pandas.DataFrame to write
       filename: the output file
       float_format: printf style format, defaults to CSV_FLOAT_FORMAT
    '''
    from tclab.defaults import CSV_FLOAT_FORMAT
    ensure_parent(filename)
    frame.to_csv(filename,
                 index=False,
                 float_format=float_format or CSV_FLOAT_FORMAT)
    bot.debug("Wrote %s rows to %s" % (len(frame), filename))
    return filename


def read_file(filename, mode="r", readlines=True):
    '''read_file will open a file, "filename" and return the content,
       as a list of lines (default) or a single string
    '''
    with open(filename, mode) as filey:
        if readlines is True:
            content = filey.readlines()
        else:
            content = filey.read()
    return content


def read_json(filename, mode='r'):
    '''read_json reads in a json file and returns
       the data structure as dict.
    '''
    with open(filename, mode) as filey:
        data = json.load(filey)
    return data
