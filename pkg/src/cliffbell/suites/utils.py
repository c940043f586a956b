import logging
import re

import numpy as np

#: seed offset between the samplers of one pipeline
SAMPLER_SEED_OFFSET = int(1e7)

#: seed offset between the checks of one verification run
CHECK_SEED_OFFSET = int(1e10)

_DEGREES = re.compile(r'^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*deg\s*$')


def set_pipeline_seeds(pipeline, seed, size, offset=0):
    """Create the random seed list for each sampler object held by the pipeline.

    Parameters
    ----------
    pipeline : instance of class BasePipeline
        the pipeline object holding the sampler classes
    seed : int
        master seed of the run
    size : int
        number of tasks to be evaluated by the pipeline
    offset : int, optional
        offset separating the seeds of different checks, by default 0
    """
    base = seed + offset
    pipeline.random_seeds = {
        i: range(base + i * SAMPLER_SEED_OFFSET, base + i * SAMPLER_SEED_OFFSET + size)
        for i in list(pipeline.sampler.keys())
    }


def chunk_sizes(samples, chunk):
    """Split ``samples`` into consecutive tasks of at most ``chunk`` configurations."""
    full, rest = divmod(samples, chunk)
    return [chunk] * full + ([rest] if rest else [])


def parse_angle(text):
    """Parse an angle given in radians (``'0.785'``) or degrees (``'45deg'``) to radians."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        match = _DEGREES.match(text)
        try:
            value = np.deg2rad(float(match.group(1))) if match else float(text)
        except ValueError:
            msg = f'Cannot parse angle "{text}". Use radians or a "deg" suffix, e.g. 45deg.'
            raise ValueError(msg) from None
    if not np.isfinite(value):
        msg = f'Angle must be finite, got {text}.'
        raise ValueError(msg)
    return float(value)


def parse_chain(text):
    """Parse a comma separated list of angles."""
    items = [item for item in text.split(',') if item.strip()] if isinstance(text, str) else list(text)
    if not items:
        msg = 'Analyzer chain is empty.'
        raise ValueError(msg)
    return [parse_angle(item) for item in items]


def _handle_log(fname):
    """Log INFO messages of the run to stderr and to the file ``fname``; return the file handler."""
    logging.basicConfig(level=logging.INFO)  # root logger
    logger = logging.getLogger()
    logger.setLevel(logging.INFO)
    run_log = logging.FileHandler(fname, mode='w')  # log everything to file
    run_log.setFormatter(
        logging.Formatter('%(process)d-%(levelname)s-%(asctime)s.%(msecs)02d-%(message)s', datefmt='%Y-%m-%d,%H:%M:%S'),
    )
    logger.addHandler(run_log)  # attach handler to the root logger
    return run_log
