"""
Helper Utilities
JSON file handling
"""

import os
import json
import tempfile
from typing import Any
from pathlib import Path

from ..core.error_codes import ErrorCode, ParseError


def load_json(file_path: str) -> Any:
    """
    Load JSON file

    Args:
        file_path: Path to JSON file

    Returns:
        Parsed JSON data

    Raises:
        ParseError: If the file is missing or not valid JSON
    """
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Malformed JSON in {file_path}: {e.msg} (line {e.lineno})",
            {"file": str(file_path)},
            code=ErrorCode.MALFORMED_JSON,
            original_exception=e
        )
    except OSError as e:
        raise ParseError(
            f"Could not read {file_path}: {e.strerror}",
            {"file": str(file_path)},
            original_exception=e
        )


def dumps_json(data: Any, indent: int = 2) -> str:
    """Canonical JSON text: sorted keys, trailing newline"""
    return json.dumps(data, indent=indent, sort_keys=True, ensure_ascii=False) + "\n"


def save_json(data: Any, file_path: str, indent: int = 2) -> Path:
    """
    Save data to JSON file atomically

    Args:
        data: Data to save
        file_path: Path to save file
        indent: JSON indentation

    Returns:
        Path written
    """
    path = Path(file_path)
    ensure_directory(str(path.parent))
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(dumps_json(data, indent))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def ensure_directory(path: str) -> Path:
    """
    Ensure directory exists

    Args:
        path: Directory path

    Returns:
        Path object
    """
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory
