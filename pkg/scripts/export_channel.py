"""
Export zoo channels as channel description files

Usage:
    python scripts/export_channel.py "platypus:0.2,0.3" out/platypus.json [kraus]

The written file can be passed back to ``qadd certify --channel-file``.
"""

import sys
from pathlib import Path

from loguru import logger

from qadd.channels.io import read_channel_file, write_channel_file
from qadd.zoo.factory import ChannelFactory


def export(spec: str, path: Path, kind: str = "isometry") -> Path:
    """Build the family channel, write it and read it back as a check"""
    channel = ChannelFactory.from_spec(spec)
    written = write_channel_file(channel, path, kind="kraus" if kind == "kraus" else "isometry")
    reloaded = read_channel_file(written)
    print(f"   Family: {spec}")
    print(f"   Dims: {reloaded.d_in} -> {reloaded.d_out} (env {reloaded.d_env})")
    print(f"   File: {written}")
    return written


def main() -> None:
    """Main export script"""
    if len(sys.argv) < 3:
        print(__doc__)
        sys.exit(2)

    print("\n" + "=" * 80)
    print("Channel Export")
    print("=" * 80 + "\n")

    try:
        export(sys.argv[1], Path(sys.argv[2]), sys.argv[3] if len(sys.argv) > 3 else "isometry")
        print("\nExport complete\n")
    except Exception as e:
        logger.error(f"Export failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
