"""CSV/JSON writers and readers, and the key=value run-config format."""
import csv
import io
import json
import math

CSV_DIGITS = 15


def format_number(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return f"{x:.{CSV_DIGITS}g}"
    return str(x)


def parse_cell(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def read_csv(path):
    """Rows of a CSV written by ``csv_text`` as dicts of parsed values."""
    with open(path, newline="") as fh:
        return [{k: parse_cell(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def json_text(obj):
    # floats go out via repr: the shortest string that round-trips exactly
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_text(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


class ConfigError(ValueError):
    pass


def parse_config(text, allowed):
    """key=value lines; '#' starts a comment.  Unknown keys are errors."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out
