'''

tclab.workers: run a list of independent tasks on a process pool

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.logger import bot
import multiprocessing
import itertools
import time
import signal


class Workers(object):

    def __init__(self, workers=None):

        if workers is None:
            from tclab.defaults import TCLAB_WORKERS
            workers = TCLAB_WORKERS
        self.workers = max(1, int(workers))
        self.runtime = None
        bot.debug("Using %s workers for multiprocess." % (self.workers))

    def start(self):
        bot.debug("Starting multiprocess")
        self.start_time = time.time()

    def end(self):
        self.end_time = time.time()
        self.runtime = self.end_time - self.start_time
        bot.debug("Ending multiprocess, runtime: %s sec" % (self.runtime))

    def run(self, func, tasks):
        '''run will send a list of tasks, each a tuple of arguments, through
           a function, and return the results in the order of the tasks.
           With a single worker (or a single task) everything runs in this
           process.

           Parameters
           ==========
           func: the function to run, must be importable at module level
           tasks: a list of tasks, each a tuple of arguments to process
        '''
        total = len(tasks)
        if total == 0:
            return []

        self.start()
        if self.workers == 1 or total == 1:
            finished = []
            for progress, task in enumerate(tasks, start=1):
                finished.append(func(*task))
                bot.show_progress(progress, total, length=35,
                                  prefix="[%s/%s]" % (progress, total))
            self.end()
            return finished

        pool = multiprocessing.Pool(min(self.workers, total), init_worker)
        try:
            results = [pool.apply_async(multi_wrapper, multi_package(func, [task]))
                       for task in tasks]

            finished = []
            for progress, result in enumerate(results, start=1):
                finished.append(result.get())
                bot.show_progress(progress, total, length=35,
                                  prefix="[%s/%s]" % (progress, total))
            pool.close()
            pool.join()

        except (KeyboardInterrupt, SystemExit):
            bot.error("Keyboard interrupt detected, terminating workers!")
            pool.terminate()
            raise

        except Exception:
            pool.terminate()
            raise

        self.end()
        return finished


# Supporting functions for MultiProcess Worker
def init_worker():
    signal.signal(signal.SIGINT, signal.SIG_IGN)


def multi_wrapper(func_args):
    function, args = func_args
    return function(*args)


def multi_package(func, args):
    return zip(itertools.repeat(func), args)
