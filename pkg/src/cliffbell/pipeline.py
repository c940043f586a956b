"""All classes in this module can be used to evaluate checks and report rows task by task.

Purpose of the Pipeline Module
------------------------------

Classes defined in the :code:`pipeline.py` module iteratively perform tasks of a
verification run or a report. A task is either a chunk of random configurations of a
sampled check or a block of angle-grid rows. Tasks are specified by passing a callable
that is evoked at each iteration of the :code:`BasePipeline`'s :code:`get_data()`
generator method. Control of the random process is maintained via the :code:`sampler`
attribute holding :code:`BaseSampler` derived instances, which are reseeded before every
task. Results therefore depend only on the seeds and never on the number of workers.

.. code-block:: python

    from cliffbell.pipeline import BasePipeline
    from cliffbell.sampler import DirectionSampler


    def max_dot(sampler):
        d = sampler[0].directions
        return {'max_dot': float(abs((d[:, 0] * d[:, 1]).sum(axis=-1)).max())}


    pipeline = BasePipeline(
        sampler=[DirectionSampler(nsamples=100, ndirections=2)],
        random_seeds=[range(3)],
        features=max_dot,
    )

    for data in pipeline.get_data(progress_bar=False):
        print(data['idx'], data['max_dot'])

Feature functions that declare an ``idx`` parameter additionally receive the running
task index, which is how grid blocks find their rows.
"""

import inspect
import logging
import os
from functools import wraps
from time import time

import numpy as np
from numpy.random import RandomState, default_rng
from tqdm import tqdm
from traits.api import Callable, Dict, Either, Instance, Int, Property, Tuple

from cliffbell.base import BaseSampler, DataGenerator
from cliffbell.config import RAY_FLAG

if RAY_FLAG:
    import ray


def log_execution_time(f):
    """Log execution time during feature calculation."""

    @wraps(f)
    def wrap(self, *args, **kw):
        self.logger.info(f'id {self._idx}: start task.')
        start = time()
        result = f(self, *args, **kw)
        end = time()
        self.logger.info(f'id {self._idx}: finished task.')
        self.logger.info(f'id {self._idx}: executing task took: {end - start:.6f} sec')
        return result

    return wrap


def accepts_idx(func):
    """Return True if the feature function declares an ``idx`` parameter."""
    return 'idx' in inspect.signature(func).parameters


def call_feature_func(func, sampler, idx, *args):
    """Evaluate a feature function, passing ``idx`` if it asks for it."""
    if accepts_idx(func):
        return func(sampler, *args, idx=idx)
    return func(sampler, *args)


def reseed(sampler, seeds):
    """Re-seed the samplers and random states of a sampler dict in place."""
    for k in sampler:
        if isinstance(sampler[k], BaseSampler):
            sampler[k].random_state = default_rng(seeds[k])
        elif isinstance(sampler[k], RandomState):
            sampler[k].seed(seeds[k])
        elif isinstance(sampler[k], np.random.Generator):
            sampler[k] = np.random.Generator(sampler[k].bit_generator.__class__(seed=seeds[k]))


class BasePipeline(DataGenerator):
    """Control the random process and iteratively evaluate a specified number of tasks.

    This class evaluates tasks by calling the function assigned to :attr:`features`.
    Furthermore this class automatically controls the sampling of instances
    of type :class:`BaseSampler` specified in the :attr:`sampler` dict.
    Re-seeding is performed at each iteration if :attr:`random_seeds` are given.
    """

    #: a dictionary with instances of :class:`~cliffbell.base.BaseSampler` derived classes as values
    #: and their sample order indices as keys. A list is converted to a dictionary with the
    #: indices of the list as keys.
    sampler = Property(
        desc='Dictionary with instances of BaseSampler derived classes as values '
        'and their sample order indices as keys',
    )

    #: task function. Either a callable accepting the sampler dict as first argument
    #: (e.g. `features = lambda sampler: {"name": sampler[0].directions}`) or a tuple of
    #: the callable and further positional arguments. A keyword parameter named ``idx``
    #: receives the running task index.
    features = Either(Callable, Tuple, desc='task function evaluated at each iteration')

    #: a dict with values of `range(seeds)` associated with sampler objects in :attr:`sampler`.
    #: A new seed is collected from each range object for every task and used to
    #: initialize the :class:`numpy.random.Generator` of the corresponding sampler.
    #: If not given, :meth:`get_data()` relies on :attr:`numsamples`.
    random_seeds = Property(desc='Dictionary of seeds associated with sampler objects')

    #: number of tasks to evaluate by :meth:`get_data()`.
    #: Will be superseded by the :attr:`random_seeds` attribute if specified.
    numsamples = Int(
        0,
        desc='number of tasks to evaluate. Will be superseded by the random_seeds attribute if specified',
    )

    #: logger instance to log calculation times for each task
    logger = Property(desc='Logger instance to log timing statistics')

    _idx = Int(0, desc='Internal running index')

    _seeds = Dict(key_trait=Int, value_trait=Int, desc='Internal running seeds')

    _logger = Instance(logging.Logger, desc='Internal logger instance')

    _sampler = Dict(key_trait=Int)

    _random_seeds = Either(Dict(key_trait=Int), None)

    def _get_logger(self):
        if self._logger is None:
            self._logger = self._get_default_logger()
        return self._logger

    def _set_logger(self, logger):
        self._logger = logger

    def _get_default_logger(self):
        """Set up standard logging to stderr."""
        logger = logging.getLogger(__name__)
        logger.propagate = False  # don't propagate to the root logger!
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(
            logging.Formatter('%(process)d-%(levelname)s-%(asctime)s.%(msecs)02d %(message)s', datefmt='%H:%M:%S'),
        )
        if logger.hasHandlers():
            logger.handlers.clear()
        logger.addHandler(stream_handler)
        return logger

    def validate_random_seeds(self):
        """Validate specified random seeds."""
        if self.random_seeds:
            if len(self.random_seeds.keys()) != len(self.sampler.keys()):
                msg = 'Number of given range objects in random_seeds and number of sampler objects need to be equal!'
                raise ValueError(msg)
            if len(set(map(len, self.random_seeds.values()))) != 1:
                msg = 'Length of range objects in random_seeds list must be equal!'
                raise ValueError(msg)

    def _feature_func_and_args(self):
        if callable(self.features):
            return self.features, ()
        if isinstance(self.features, tuple):
            return self.features[0], tuple(self.features[1:])
        msg = 'features attribute must be a callable or a tuple containing a callable and its arguments!'
        raise ValueError(msg)

    @log_execution_time
    def _extract_features(self):
        """Evaluate the current task."""
        if self.features is None:
            return {}
        func, args = self._feature_func_and_args()
        return call_feature_func(func, self.sampler, self._idx, *args)

    def _update_sample_index_and_seeds(self, seed_iter=None):
        """Update seeds and running index for the current task."""
        self._idx += 1
        if not self.random_seeds:
            return
        self._seeds = {k: next(seed_iter[k]) for k in seed_iter}
        reseed(self.sampler, self._seeds)

    def _get_sampler(self):
        return self._sampler

    def _set_sampler(self, sampler):
        if isinstance(sampler, list):
            self._sampler = dict(enumerate(sampler))
        else:
            self._sampler = sampler

    def _get_random_seeds(self):
        return self._random_seeds

    def _set_random_seeds(self, random_seeds):
        if isinstance(random_seeds, list):
            self._random_seeds = dict(enumerate(random_seeds))
        else:
            self._random_seeds = random_seeds

    def _validate_feature_func(self):
        func, args = self._feature_func_and_args()
        params = [p for name, p in inspect.signature(func).parameters.items() if name != 'idx']
        if not params:
            msg = (
                'feature functions must accept at least one argument in order to pass the sampler objects!'
                ' E.g. lambda sampler: {...}'
            )
            raise ValueError(msg)
        if len(params) > 1 and len(args) == len(params):
            msg = (
                'Number of arguments of feature function matches the number of arguments in the tuple!'
                ' An additional argument is missing to pass the sampler objects!'
                ' E.g. lambda sampler, arg1, arg2: {...}'
            )
            raise ValueError(msg)

    def _prepare(self, start_idx):
        self._validate_feature_func()
        self._idx = start_idx - 1
        self._seeds = {}
        if self.random_seeds:
            self.validate_random_seeds()
            seed_iter = {k: iter(v) for k, v in self.random_seeds.items()}
            return seed_iter, len(list(self.random_seeds.values())[0])
        return None, self.numsamples

    def _task_header(self):
        return {'idx': self._idx, 'seeds': np.array(list(self._seeds.items()))}

    def get_data(self, progress_bar=True, start_idx=1):
        """Provide the task results, sampler seeds and indices.

        Parameters
        ----------
        progress_bar : bool, optional
            if True, a progress bar is displayed, by default True
        start_idx : int, optional
            the index of the first task, by default 1

        Yields
        ------
        dict
            the result of one task together with its seeds and index
        """
        seed_iter, nsamples = self._prepare(start_idx)
        sampler_order = sorted(self.sampler.keys())
        pbar = tqdm(total=nsamples, colour='#1f77b4', disable=(not progress_bar))
        for _ in range(nsamples):
            self._update_sample_index_and_seeds(seed_iter)
            for i in sampler_order:
                if isinstance(self.sampler[i], BaseSampler):
                    self.sampler[i].sample()
            data = self._task_header()
            data.update(self._extract_features())
            yield data
            pbar.update(1)
        pbar.close()


class SamplerActor:
    """Actor class to evaluate tasks on a ray worker."""

    def __init__(self, sampler, feature_func):
        self.sampler = sampler
        self.feature_func = feature_func
        self.sampler_order = sorted(self.sampler.keys())

    def sample(self, seeds):
        """Invoke the :meth:`sample` function of the :class:`BaseSampler` instances."""
        if seeds:
            reseed(self.sampler, seeds)
        for k in self.sampler_order:
            if isinstance(self.sampler[k], BaseSampler):
                self.sampler[k].sample()
        return self.sampler

    def extract_features(self, idx, seeds, times, *feature_args):
        """Remote evaluation of one task."""
        times[1] = time()
        data = call_feature_func(self.feature_func, self.sample(seeds), idx, *feature_args)
        times[2] = time()
        return (data, times, os.getpid())

    def exit(self):
        ray.actor.exit_actor()


class ActorHandler:
    def __init__(self, numworkers, sampler, feature_func, remote_args=None):
        remote_actor = ray.remote(SamplerActor)
        self.actors = [
            remote_actor.options(**(remote_args or {})).remote(
                sampler=sampler,
                feature_func=feature_func,
            )
            for _ in range(numworkers)
        ]

    def __enter__(self):
        return self.actors

    def __exit__(self, type, value, traceback):  # noqa A002
        for actor in self.actors:
            actor.exit.remote()


class DistributedPipeline(BasePipeline):
    """Class to evaluate tasks in parallel with ray actors.

    Tasks are scheduled asynchronously, but :meth:`get_data` yields them in the order of
    their index, so the output is identical to :class:`BasePipeline` for the same seeds.
    """

    #: number of workers to be used for parallel calculation (usually number of CPUs).
    #: each worker is associated with a stateless task.
    numworkers = Int(1, desc='number of tasks to be performed in parallel (usually number of CPUs)')

    #: additional arguments to be passed to ray remote actors, e.g. num_cpus
    remote_args = Dict()

    def _log_execution_time(self, task_index, times, pid):
        self.logger.info(f'id {task_index} on pid {pid}: scheduling task took: {times[1] - times[0]:.6f} sec')
        self.logger.info(f'id {task_index} on pid {pid}: executing task took: {times[2] - times[1]:.6f} sec')
        self.logger.info(f'id {task_index} on pid {pid}: retrieving result took: {times[3] - times[2]:.6f} sec')
        self.logger.info(f'id {task_index} on pid {pid}: full time: {times[3] - times[0]:.6f} sec')

    def _sample_and_schedule_task(self, actor, task_dict):
        self.logger.info(f'id {self._idx}: start task.')
        times = [time(), None, None, None]  # (schedule, execution, stop, get) timestamps
        _, args = self._feature_func_and_args()
        result_id = actor.extract_features.remote(self._idx, dict(self._seeds), times, *args)
        task_dict[result_id] = (actor, self._task_header())

    def _update_sample_index_and_seeds(self, seed_iter=None):
        """Update seeds and running index for the next task (reseeding happens on the actor)."""
        self._idx += 1
        if not self.random_seeds:
            return
        self._seeds = {k: next(seed_iter[k]) for k in seed_iter}

    def get_data(self, progress_bar=True, start_idx=1):
        """Provide the task results, sampler seeds and indices.

        All tasks are evaluated in parallel and asynchronously. Finished tasks are held
        back until every task with a smaller index has been yielded.

        Parameters
        ----------
        progress_bar : bool, optional
            if True, a progress bar is displayed, by default True
        start_idx : int, optional
            the index of the first task, by default 1

        Yields
        ------
        dict
            the result of one task together with its seeds and index
        """
        if not RAY_FLAG:
            msg = 'DistributedPipeline requires the ray package. Install it or use BasePipeline instead.'
            raise ImportError(msg)
        seed_iter, nsamples = self._prepare(start_idx)
        nworkers = min(nsamples, self.numworkers)
        pbar = tqdm(total=nsamples, colour='#1f77b4', disable=(not progress_bar))
        func, _ = self._feature_func_and_args()
        task_dict = {}
        finished = {}
        next_idx = start_idx
        with ActorHandler(nworkers, self.sampler, func, remote_args=self.remote_args) as actors:
            for actor in actors:
                self._update_sample_index_and_seeds(seed_iter)
                self._sample_and_schedule_task(actor, task_dict)
            while next_idx < nsamples + start_idx:
                done_ids, _ = ray.wait(list(task_dict.keys()))
                did = done_ids[0]
                try:
                    data, times, pid = ray.get(did)
                except Exception:
                    self.logger.info(f'task with id {task_dict[did][1]["idx"]} failed with Traceback:', exc_info=True)
                    raise
                times[-1] = time()
                actor, header = task_dict.pop(did)
                data = {**header, **data}
                self.logger.info(f'id {data["idx"]} on pid {pid}: finished task.')
                self._log_execution_time(data['idx'], times, pid)
                finished[data['idx']] = data
                if (nsamples + start_idx - 1 - self._idx) > 0:  # directly schedule next task
                    self._update_sample_index_and_seeds(seed_iter)
                    self._sample_and_schedule_task(actor, task_dict)
                while next_idx in finished:
                    yield finished.pop(next_idx)
                    next_idx += 1
                    pbar.update(1)
        pbar.close()
