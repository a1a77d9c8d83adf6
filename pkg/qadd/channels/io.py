"""
Channel description files

A channel file is JSON with ``kind`` ("isometry" or "kraus"), ``dims``
[d_in, d_out, d_env] and ``entries``, a flat list of [re, im] pairs in
row-major order: the (d_out d_env) x d_in isometry with rows b*d_env + e, or
the d_env Kraus operators of shape d_out x d_in one after another.
"""

import json
from pathlib import Path
from typing import Literal, Union

import numpy as np
from loguru import logger
from pydantic import ValidationError

from qadd.channels.base import Channel
from qadd.middleware.error_handler import ChannelFileError, QaddException
from qadd.models.schemas import ChannelFile

PathLike = Union[str, Path]


def read_channel_file(path: PathLike) -> Channel:
    """
    Load a channel from a JSON description

    Args:
        path: file location

    Returns:
        Channel labelled with the file stem
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        description = ChannelFile.model_validate(raw)
    except FileNotFoundError:
        raise ChannelFileError(f"Channel file not found: {path}")
    except json.JSONDecodeError as e:
        raise ChannelFileError(f"Channel file {path} is not valid JSON: {e}")
    except ValidationError as e:
        raise ChannelFileError(f"Channel file {path} is malformed: {e.errors()}")

    d_in, d_out, d_env = description.dims
    values = np.array([complex(re, im) for re, im in description.entries], dtype=np.complex128)
    try:
        if description.kind == "isometry":
            channel = Channel.from_isometry(
                values.reshape(d_out * d_env, d_in), d_out=d_out, d_env=d_env, label=path.stem
            )
        else:
            channel = Channel.from_kraus(values.reshape(d_env, d_out, d_in), label=path.stem)
    except QaddException as e:
        raise ChannelFileError(f"Channel file {path} does not describe a channel: {e.message}")

    logger.debug(f"Loaded channel {channel.label}: {d_in} -> {d_out} (env {d_env})")
    return channel


def write_channel_file(
    channel: Channel, path: PathLike, kind: Literal["isometry", "kraus"] = "isometry"
) -> Path:
    """Write a channel in the format read by read_channel_file"""
    path = Path(path)
    if kind == "isometry":
        values = channel.isometry.matrix.reshape(-1)
    else:
        values = channel.kraus.reshape(-1)
    description = ChannelFile(
        kind=kind,
        dims=[channel.d_in, channel.d_out, channel.d_env],
        entries=[(float(z.real), float(z.imag)) for z in values],
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(description.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
