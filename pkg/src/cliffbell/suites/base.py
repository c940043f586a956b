"""Base class for the verification suite and the report builders."""

import logging

from traits.api import Bool, Dict, HasPrivateTraits, Instance, Int, Property

from cliffbell.model import EnsembleMeasure
from cliffbell.pipeline import BasePipeline, DistributedPipeline


class SuiteBase(HasPrivateTraits):
    """
    Base class for running pipelines of checks or report rows.

    Attributes
    ----------
    tasks : int
        Number of parallel tasks. Defaults to 1 (sequential calculation).
    measure : EnsembleMeasure
        Measure over the microstates used for all averages.
    """

    tasks = Property(desc='number of parallel tasks')
    remote_args = Dict({})
    measure = Instance(EnsembleMeasure, (), desc='two-point measure over the microstates')
    progress_bar = Bool(False, desc='show a progress bar on stderr')
    #: logger instance to log calculation times for each task
    logger = Property(desc='Logger instance to log timing statistics')

    # private
    _logger = Instance(logging.Logger, desc='Internal logger instance')
    _tasks = Int(1, desc='number of parallel tasks')

    def __init__(self, tasks=1, remote_args=None, logger=None, **traits):
        HasPrivateTraits.__init__(self, **traits)
        self.tasks = tasks
        self.remote_args = remote_args or {}
        self.logger = logger

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

    def _get_tasks(self):
        return self._tasks

    def _set_tasks(self, tasks):
        if tasks < 1:
            msg = f'Number of tasks must be at least 1, got {tasks}.'
            raise ValueError(msg)
        self._tasks = tasks

    def get_pipeline_instance(self):
        if self.tasks > 1:
            pipeline = DistributedPipeline(numworkers=self.tasks, remote_args=self.remote_args)
        else:
            pipeline = BasePipeline()
        pipeline.logger = self.logger
        return pipeline

    def _generate(self, pipeline, start_idx=1):
        """Yield the task results of ``pipeline`` in index order."""
        yield from pipeline.get_data(progress_bar=self.progress_bar, start_idx=start_idx)
