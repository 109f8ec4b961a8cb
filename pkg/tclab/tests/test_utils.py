#!/usr/bin/python

# Copyright (C) 2019 The tclab Developers.

# This Source Code Form is subject to the terms of the
# Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
# with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

import os
import pytest


def test_write_read_files(tmp_path):
    '''test_write_read_files will test the functions write_file and read_file
    '''
    print("Testing utils.write_file...")
    from tclab.utils import write_file
    tmpfile = str(tmp_path / 'written_file.txt')
    assert not os.path.exists(tmpfile)
    write_file(tmpfile, "hello!")
    assert os.path.exists(tmpfile)

    print("Testing utils.read_file...")
    from tclab.utils import read_file
    content = read_file(tmpfile)[0]
    assert content == "hello!"


def test_write_file_creates_parent(tmp_path):
    from tclab.utils import write_file
    tmpfile = str(tmp_path / 'nested' / 'deeper' / 'file.txt')
    write_file(tmpfile, "hello!")
    assert os.path.exists(tmpfile)


def test_write_bad_json(tmp_path):
    from tclab.utils import write_json
    bad_json = {"Wakkawakkawakka'}": [{True}, "2", 3]}
    tmpfile = str(tmp_path / 'json_file.txt')
    assert not os.path.exists(tmpfile)
    with pytest.raises(TypeError):
        write_json(bad_json, tmpfile)
    assert not os.path.exists(tmpfile)


def test_write_json(tmp_path):
    import json
    from tclab.utils import write_json, read_json
    good_json = {"Wakkawakkawakka": [True, "2", 3]}
    tmpfile = str(tmp_path / 'good_json_file.txt')
    assert not os.path.exists(tmpfile)
    write_json(good_json, tmpfile)
    with open(tmpfile, 'r') as f:
        content = json.loads(f.read())
    assert isinstance(content, dict)
    assert "Wakkawakkawakka" in content
    content = read_json(tmpfile)
    assert "Wakkawakkawakka" in content


def test_write_json_is_stable(tmp_path):
    print("Testing utils.write_json key order")
    from tclab.utils import write_json
    first, second = str(tmp_path / 'a.json'), str(tmp_path / 'b.json')
    write_json({"b": 1, "a": [1.5, 2]}, first)
    write_json({"a": [1.5, 2], "b": 1}, second)
    with open(first, 'rb') as one, open(second, 'rb') as two:
        assert one.read() == two.read()


def test_write_csv(tmp_path):
    print("Testing utils.write_csv")
    import pandas
    from tclab.utils import read_file, write_csv
    frame = pandas.DataFrame({"n": [2, 4], "value": [1 / 3, float("nan")]},
                             columns=["n", "value"])
    tmpfile = str(tmp_path / 'table.csv')
    write_csv(frame, tmpfile)
    lines = [line.strip() for line in read_file(tmpfile)]
    assert lines == ["n,value", "2,0.333333333333", "4,"]


def test_mkdir_p(tmp_path):
    from tclab.utils import mkdir_p
    folder = str(tmp_path / 'a' / 'b')
    mkdir_p(folder)
    mkdir_p(folder)
    assert os.path.isdir(folder)

    blocker = str(tmp_path / 'file')
    with open(blocker, 'w') as filey:
        filey.write("x")
    with pytest.raises(OSError):
        mkdir_p(os.path.join(blocker, 'child'))


def test_highlight_json_without_color():
    print("Testing utils.highlight_json")
    from tclab.logger import bot
    from tclab.utils import highlight_json
    colorize = bot.colorize
    bot.colorize = False
    try:
        assert highlight_json('{"a": 1}') == '{"a": 1}'
    finally:
        bot.colorize = colorize


def test_logging_level(monkeypatch):
    print("Testing logger.get_logging_level")
    from tclab.logger.message import DEBUG, INFO, QUIET, get_logging_level
    monkeypatch.setenv("MESSAGELEVEL", "DEBUG")
    assert get_logging_level() == DEBUG
    monkeypatch.setenv("MESSAGELEVEL", "0")
    assert get_logging_level() == QUIET
    monkeypatch.delenv("MESSAGELEVEL")
    assert get_logging_level() == INFO


def test_getint(monkeypatch):
    from tclab.defaults import getint
    monkeypatch.setenv("TCLAB_TEST_INT", "12")
    assert getint("TCLAB_TEST_INT", 3) == 12
    monkeypatch.setenv("TCLAB_TEST_INT", "twelve")
    assert getint("TCLAB_TEST_INT", 3) == 3


def test_bot_follows_replaced_streams(monkeypatch):
    print("Testing logger writes to the current streams")
    import io
    import sys
    from tclab.logger import bot

    closed = io.StringIO()
    monkeypatch.setattr(sys, "stderr", closed)
    bot.warning("first stream")
    closed.close()

    replacement = io.StringIO()
    monkeypatch.setattr(sys, "stderr", replacement)
    bot.warning("second stream")
    assert "second stream" in replacement.getvalue()
