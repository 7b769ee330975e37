"""
Class for worker pool object
"""
import multiprocessing
from ...config import settings, setup_logging


def _initialize_worker():
    setup_logging('simulation.log')


class Worker:
    """Runs a function over a sequence of jobs on a pool of worker processes. Results are
    always yielded in job order so reductions over them are deterministic. A single worker
    runs the jobs in the calling process.

    :param _exec: function to run for each job, must be picklable
    :type _exec: Callable[..., Any]
    :param threads: number of workers. None uses the Threads setting (NLTURBO_THREADS)
    :type threads: Union[int, None]
    """
    def __init__(self, _exec, threads=None):
        self._exec = _exec
        threads = settings.value(settings.Key.Threads) if threads is None else threads
        self.threads = max(1, int(threads))
        self.pool = None

    def run(self, jobs):
        """Executes the function for each job and yields the results in job order. Breaking
        out of the loop early stops the remaining jobs.

        :param jobs: job arguments
        :type jobs: Iterable[Any]
        :return: results in job order
        :rtype: Iterator[Any]
        """
        if self.threads == 1:
            for job in jobs:
                yield self._exec(job)
            return

        self.pool = multiprocessing.Pool(self.threads, initializer=_initialize_worker)
        try:
            for result in self.pool.imap(self._exec, jobs):
                yield result
        finally:
            self.pool.terminate()
            self.pool.join()
            self.pool = None

    @classmethod
    def callFromWorker(cls, func, jobs, threads=None):
        """Calls the given function for all jobs and returns the list of results

        :param func: function to run on the workers
        :type func: Callable[..., Any]
        :param jobs: job arguments
        :type jobs: Iterable[Any]
        :param threads: number of workers
        :type threads: Union[int, None]
        :return: results in job order
        :rtype: List[Any]
        """
        return list(cls(func, threads).run(jobs))
