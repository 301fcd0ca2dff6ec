# -*- coding: utf-8 -*-
from concurrent import futures
import logging
from typing import Callable, Iterable, List, TypeVar

__all__ = ('run',)

logger = logging.getLogger(__name__)

Job = TypeVar('Job')
Result = TypeVar('Result')


def run(function: Callable[[Job], Result], jobs: Iterable[Job], max_workers: int = 1) -> List[Result]:
    """
    Process a number of independent jobs, returning the results in job order

    :param function: called once per job
    :param jobs: the jobs to process
    :param max_workers: the maximum number of jobs processed concurrently, 1 runs them in turn
    """
    jobs = list(jobs)
    if max_workers < 1:
        raise ValueError('max_workers must be at least 1, got {}'.format(max_workers))
    if max_workers == 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]

    logger.debug('Running %i jobs on %i workers', len(jobs), max_workers)
    with futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(function, jobs))
