"""Dataset loading, validation, and serialization for both classification tasks.

Datasets travel as UTF-8 TSV with LF newlines and an ``id<TAB>text<TAB>labels``
header. Task A rows carry exactly one of ``real``/``fake``; task B rows carry a
comma-separated subset of the five hostility labels, where ``non-hostile``
excludes every other label. Literal tabs, newlines, and backslashes inside the
text field are escaped as ``\\t``, ``\\n``, and ``\\\\`` so one row is always
one line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

TASK_A_LABELS = ("real", "fake")
TASK_B_LABELS = ("defame", "fake", "hate", "offensive", "non-hostile")
NON_HOSTILE = "non-hostile"
HOSTILE_LABELS = tuple(l for l in TASK_B_LABELS if l != NON_HOSTILE)

# "offense" circulates as an alternative spelling; normalize it on ingestion.
_LABEL_ALIASES = {"offense": "offensive"}


class Task(enum.Enum):
    """The two supported classification tasks."""

    A = "a"  # binary real/fake news
    B = "b"  # multi-label hostility dimensions

    @property
    def label_domain(self) -> tuple[str, ...]:
        return TASK_A_LABELS if self is Task.A else TASK_B_LABELS


class DatasetError(ValueError):
    """Base class for dataset validation failures.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)

    def at_line(self, line: int) -> "DatasetError":
        return type(self)(self.message, line=line)


class EncodingError(DatasetError):
    """Input bytes are not valid UTF-8."""


class MalformedRowError(DatasetError):
    """Bad header or a row with the wrong number of columns."""


class UnknownLabelError(DatasetError):
    """A label token outside the task's domain (or an empty token)."""


class MultiLabelError(DatasetError):
    """More than one label on a task A row."""


class ExclusivityError(DatasetError):
    """``non-hostile`` combined with hostile labels on a task B row."""


class DuplicateIdError(DatasetError):
    """The same document id appears twice in one dataset."""


class UnlabeledDatasetError(DatasetError):
    """An operation that needs labels met a document without them."""


def canonical_label(token: str) -> str:
    """Trim, lowercase, and resolve spelling aliases of a label token."""
    token = token.strip().lower()
    return _LABEL_ALIASES.get(token, token)


def validate_label_set(task: Task, labels) -> frozenset[str]:
    """Check a set of canonical label tokens against the task's rules."""
    labels = frozenset(labels)
    domain = task.label_domain
    for label in sorted(labels):
        if label not in domain:
            raise UnknownLabelError(
                f"unknown label {label!r} for task {task.value.upper()}"
            )
    if not labels:
        raise UnknownLabelError("empty label set")
    if task is Task.A and len(labels) > 1:
        raise MultiLabelError(
            f"task A documents take exactly one label, got {len(labels)}"
        )
    if task is Task.B and NON_HOSTILE in labels and len(labels) > 1:
        raise ExclusivityError(
            f"{NON_HOSTILE!r} cannot be combined with hostile labels"
        )
    return labels


@dataclass(frozen=True)
class LabelSet:
    """A validated set of labels for one document."""

    task: Task
    labels: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "labels", validate_label_set(self.task, self.labels))

    def ordered(self) -> tuple[str, ...]:
        """Labels in the fixed domain order (canonical for serialization)."""
        domain = self.task.label_domain
        return tuple(sorted(self.labels, key=domain.index))

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Document:
    """One ingested post: id, raw text, and labels when present."""

    id: str
    text: str
    labels: LabelSet | None = None

    def __post_init__(self):
        if not self.id:
            raise MalformedRowError("document id must be non-empty")


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of documents for one task."""

    task: Task
    documents: tuple[Document, ...]

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise DuplicateIdError(f"duplicate id {doc.id!r}")
            seen.add(doc.id)
            if doc.labels is not None and doc.labels.task is not self.task:
                raise ValueError(
                    f"document {doc.id!r} is labeled for task "
                    f"{doc.labels.task.value.upper()}, dataset is task "
                    f"{self.task.value.upper()}"
                )

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def labeled(self) -> bool:
        return all(doc.labels is not None for doc in self.documents)


def escape_text(text: str) -> str:
    """Escape backslashes, tabs, and newlines so the text fits in one field."""
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_text(text: str) -> str:
    """Invert :func:`escape_text`; unknown escape sequences pass through."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "t":
                out.append("\t")
                i += 2
                continue
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _parse_header(line: str, labeled: bool) -> tuple[str, ...]:
    columns = tuple(line.split("\t"))
    allowed = ("id", "text", "labels")
    if (
        not columns
        or columns[0] != "id"
        or len(set(columns)) != len(columns)
        or any(c not in allowed for c in columns)
        or list(columns) != [c for c in allowed if c in columns]
    ):
        raise MalformedRowError(
            f"bad header {line!r}; expected tab-separated columns from "
            "'id', 'text', 'labels' in that order",
            line=1,
        )
    if labeled and "labels" not in columns:
        raise MalformedRowError("labeled input needs a 'labels' column", line=1)
    return columns


def _parse_label_field(raw: str, task: Task) -> LabelSet:
    tokens = []
    for piece in raw.split(","):
        token = canonical_label(piece)
        if not token:
            raise UnknownLabelError("empty label token")
        tokens.append(token)
    return LabelSet(task, frozenset(tokens))


def parse_dataset(data: bytes | str, task: Task, *, labeled: bool = True) -> Dataset:
    """Parse a TSV byte stream (or decoded string) into a validated Dataset.

    Input order is preserved. Every failure names the offending 1-based line
    via a :class:`DatasetError` subclass identifying what went wrong.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        raw = bytes(data)
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = raw[: exc.start].count(b"\n") + 1
            raise EncodingError("invalid UTF-8", line=line) from exc
    else:
        text = data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedRowError("missing header row", line=1)
    columns = _parse_header(lines[0], labeled)

    documents = []
    seen: dict[str, int] = {}
    for lineno, row in enumerate(lines[1:], start=2):
        fields = row.split("\t")
        if len(fields) != len(columns):
            raise MalformedRowError(
                f"expected {len(columns)} columns, found {len(fields)}", line=lineno
            )
        record = dict(zip(columns, fields))
        doc_id = record["id"]
        if not doc_id:
            raise MalformedRowError("empty id", line=lineno)
        if doc_id in seen:
            raise DuplicateIdError(
                f"duplicate id {doc_id!r} (first seen on line {seen[doc_id]})",
                line=lineno,
            )
        seen[doc_id] = lineno
        labels = None
        if labeled:
            try:
                labels = _parse_label_field(record["labels"], task)
            except DatasetError as err:
                raise err.at_line(lineno) from None
        documents.append(Document(doc_id, unescape_text(record.get("text", "")), labels))
    return Dataset(task, tuple(documents))


def load_dataset(path, task: Task, *, labeled: bool = True) -> Dataset:
    """Read and parse a dataset file."""
    return parse_dataset(Path(path).read_bytes(), task, labeled=labeled)


def serialize_dataset(dataset: Dataset, *, labeled: bool = True) -> str:
    """Render a Dataset back to its TSV form (inverse of :func:`parse_dataset`)."""
    if labeled:
        rows = ["id\ttext\tlabels"]
        for doc in dataset.documents:
            if doc.labels is None:
                raise UnlabeledDatasetError(f"document {doc.id!r} has no labels")
            rows.append(
                f"{doc.id}\t{escape_text(doc.text)}\t{','.join(doc.labels.ordered())}"
            )
    else:
        rows = ["id\ttext"]
        rows.extend(f"{doc.id}\t{escape_text(doc.text)}" for doc in dataset.documents)
    return "\n".join(rows) + "\n"


def class_support(dataset: Dataset) -> dict[str, int]:
    """Count documents carrying each label; multi-label documents count once
    per label. Keys cover the task's full domain, including zero counts."""
    support = {label: 0 for label in dataset.task.label_domain}
    for doc in dataset.documents:
        if doc.labels is None:
            raise UnlabeledDatasetError(f"document {doc.id!r} has no labels")
        for label in doc.labels.labels:
            support[label] += 1
    return support
