"""Small file helpers shared across the toolkit."""

import contextlib
import os
import tempfile
from pathlib import Path


@contextlib.contextmanager
def atomic_write(path, encoding="utf-8"):
    """Open a temp file for writing and rename it onto `path` on success.

    A failure inside the block leaves any existing file at `path` untouched.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="\n") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def read_lines(path):
    """All lines of a UTF-8 file without trailing newlines. Invalid UTF-8 is a hard error."""
    with open(path, encoding="utf-8", errors="strict") as fh:
        return [line.rstrip("\n") for line in fh]
