"""
File Operations Module

Directory, JSON and CSV helpers used for configs and run outputs.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import pandas as pd


class FileOpsError(OSError):
    """Raised when a file cannot be read, parsed or written."""


def ensure_directory(directory_path: Union[str, Path]) -> Path:
    """
    Create directory if it doesn't exist.

    Args:
        directory_path: Path to the directory

    Returns:
        Path object of the created/existing directory
    """
    path = Path(directory_path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise FileOpsError(f"Cannot create directory {path}: {e}") from e
    return path


def read_json(file_path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON document.

    Args:
        file_path: Path to the JSON file

    Returns:
        Parsed dictionary

    Raises:
        FileOpsError: If the file is missing, unreadable or not a JSON object
    """
    path = Path(file_path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise FileOpsError(f"JSON file {path} does not exist") from e
    except json.JSONDecodeError as e:
        raise FileOpsError(f"Malformed JSON in {path}: {e}") from e
    except OSError as e:
        raise FileOpsError(f"Error reading JSON file {path}: {e}") from e

    if not isinstance(data, dict):
        raise FileOpsError(f"JSON file {path} must contain an object at top level")
    return data


def write_json(data: Dict[str, Any], file_path: Union[str, Path], indent: int = 2) -> Path:
    """
    Write data to a JSON file with sorted keys, so equal data gives equal bytes.

    Args:
        data: Dictionary to write
        file_path: Path to the JSON file
        indent: JSON indentation level

    Returns:
        Path of the written file
    """
    path = Path(file_path)
    ensure_directory(path.parent)

    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=indent, sort_keys=True, ensure_ascii=False)
            f.write('\n')
    except OSError as e:
        raise FileOpsError(f"Error writing JSON file {path}: {e}") from e
    return path


def write_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str],
              file_path: Union[str, Path]) -> Path:
    """
    Write records to CSV with a fixed column order and a header row.

    Args:
        rows: Records; missing keys become empty cells
        columns: Column order
        file_path: Output CSV file path

    Returns:
        Path of the written file
    """
    path = Path(file_path)
    ensure_directory(path.parent)

    # object dtype keeps integer columns with gaps from turning into floats
    frame = pd.DataFrame(list(rows), columns=list(columns), dtype=object)
    try:
        frame.to_csv(path, index=False, lineterminator='\n')
    except OSError as e:
        raise FileOpsError(f"Error writing CSV file {path}: {e}") from e
    return path


def read_csv(file_path: Union[str, Path]) -> pd.DataFrame:
    """
    Read a CSV file written by write_csv.

    Args:
        file_path: Path to the CSV file

    Returns:
        DataFrame with the file's columns
    """
    path = Path(file_path)
    try:
        return pd.read_csv(path)
    except FileNotFoundError as e:
        raise FileOpsError(f"CSV file {path} does not exist") from e
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise FileOpsError(f"Error reading CSV file {path}: {e}") from e


def find_files(directory: Union[str, Path], pattern: str = "*",
               recursive: bool = True) -> List[Path]:
    """
    Find files matching a pattern in a directory, sorted by path.

    Args:
        directory: Directory to search in
        pattern: File pattern to match (e.g., "manifest.json")
        recursive: Whether to search subdirectories

    Returns:
        Sorted list of Path objects matching the pattern
    """
    path = Path(directory)

    if not path.exists():
        return []

    found = path.rglob(pattern) if recursive else path.glob(pattern)
    return sorted(p for p in found if p.is_file())


# Export main functions
__all__ = [
    'FileOpsError',
    'ensure_directory',
    'read_json',
    'write_json',
    'write_csv',
    'read_csv',
    'find_files',
]
