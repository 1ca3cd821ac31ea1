"""Time-stamped document store: ingest, calendar slicing, sub-corpus selection."""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

GRANULARITIES = ("year", "month", "week", "day")


class IngestError(ValueError):
    """Fatal problem with a corpus input file (unreadable, duplicate ids)."""


@dataclass
class Document:
    """One time-stamped text. `sentences` is filled by the preprocess step."""

    id: str
    timestamp: dt.date
    text: str
    sentences: list[list[str]] = field(default_factory=list)


@dataclass
class TimeSlice:
    """A consecutive calendar span and the ids of the documents inside it."""

    index: int
    start: dt.date
    end: dt.date  # inclusive
    doc_ids: list[str] = field(default_factory=list)


@dataclass
class SlicedCorpus:
    """Documents partitioned into consecutive, calendar-aligned time slices.

    Slices cover [min timestamp, max timestamp] without gaps; empty slices
    are retained so that slice indices line up with calendar time. Treat the
    corpus as read-only once built: it is shared across parallel workers.
    """

    documents: list[Document]
    granularity: str
    slices: list[TimeSlice]
    _by_id: dict[str, Document] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._by_id:
            self._by_id = {d.id: d for d in self.documents}

    @property
    def slice_count(self) -> int:
        return len(self.slices)

    def document(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    def docs_in_slice(self, index: int) -> list[Document]:
        return [self._by_id[i] for i in self.slices[index].doc_ids]

    def __len__(self) -> int:
        return len(self.documents)


def _align(day: dt.date, granularity: str) -> dt.date:
    """Snap a date to the start of its calendar unit."""
    if granularity == "year":
        return day.replace(month=1, day=1)
    if granularity == "month":
        return day.replace(day=1)
    if granularity == "week":
        return day - dt.timedelta(days=day.weekday())  # ISO week, Monday start
    return day


def _unit_start(origin: dt.date, granularity: str, k: int) -> dt.date:
    """Start date of the k-th unit counted from an aligned origin."""
    if granularity == "year":
        return origin.replace(year=origin.year + k)
    if granularity == "month":
        m = origin.month - 1 + k
        return dt.date(origin.year + m // 12, m % 12 + 1, 1)
    if granularity == "week":
        return origin + dt.timedelta(weeks=k)
    return origin + dt.timedelta(days=k)


def _unit_index(day: dt.date, origin: dt.date, granularity: str) -> int:
    if granularity == "year":
        return day.year - origin.year
    if granularity == "month":
        return (day.year - origin.year) * 12 + (day.month - origin.month)
    if granularity == "week":
        return (_align(day, "week") - origin).days // 7
    return (day - origin).days


def assign_time_slices(documents: list[Document], granularity: str = "month") -> SlicedCorpus:
    """Partition documents into consecutive calendar slices.

    Slice boundaries are aligned to calendar units (month slices start on
    day 1, week slices on Monday). The slice count is the number of units
    between the first and last timestamp inclusive; units with no documents
    are kept as empty slices.
    """
    if not documents:
        raise ValueError("cannot slice an empty document collection")
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}, got {granularity!r}")

    origin = _align(min(d.timestamp for d in documents), granularity)
    last = max(d.timestamp for d in documents)
    count = _unit_index(last, origin, granularity) + 1

    slices = []
    for k in range(count):
        start = _unit_start(origin, granularity, k)
        end = _unit_start(origin, granularity, k + 1) - dt.timedelta(days=1)
        slices.append(TimeSlice(index=k, start=start, end=end))
    for doc in documents:
        slices[_unit_index(doc.timestamp, origin, granularity)].doc_ids.append(doc.id)
    return SlicedCorpus(documents=list(documents), granularity=granularity, slices=slices)


def _iter_records(path: str, format: str, line_offset: int = 0):
    """Yield (line_number, record_dict) pairs, or (line_number, None) for junk lines."""
    if format == "jsonl":
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    yield lineno, json.loads(line)
                except json.JSONDecodeError:
                    yield lineno, None
    elif format == "csv":
        with open(path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            for record in reader:
                yield reader.line_num, record
    else:
        raise ValueError(f"format must be 'jsonl' or 'csv', got {format!r}")


def ingest_documents(
    path: str,
    format: str = "jsonl",
    id_field: str = "id",
    date_field: str = "date",
    text_field: str = "text",
) -> list[Document]:
    """Read documents from a JSON-Lines or CSV file.

    Records missing a field or carrying an unparseable date are skipped and
    logged with their line number; duplicate ids abort the ingest because a
    corpus with ambiguous ids corrupts every downstream frequency statistic.
    Accepted/rejected counts are logged at the end.
    """
    docs: list[Document] = []
    seen: set[str] = set()
    rejected = 0
    try:
        records = list(_iter_records(path, format))
    except OSError as e:
        raise IngestError(f"cannot read corpus file {path}: {e}") from e

    for lineno, record in records:
        if record is None:
            log.warning("%s line %d: malformed record skipped", path, lineno)
            rejected += 1
            continue
        doc_id = record.get(id_field)
        date_raw = record.get(date_field)
        text = record.get(text_field)
        if doc_id is None or date_raw is None or text is None:
            log.warning("%s line %d: missing field, record skipped", path, lineno)
            rejected += 1
            continue
        try:
            timestamp = dt.date.fromisoformat(str(date_raw).strip())
        except ValueError:
            log.warning("%s line %d: invalid date %r, record skipped", path, lineno, date_raw)
            rejected += 1
            continue
        doc_id = str(doc_id)
        if doc_id in seen:
            raise IngestError(f"{path} line {lineno}: duplicate document id {doc_id!r}")
        seen.add(doc_id)
        docs.append(Document(id=doc_id, timestamp=timestamp, text=str(text)))

    log.info("ingested %s: %d accepted, %d rejected", path, len(docs), rejected)
    return docs


def export_documents(documents: list[Document], path: str, format: str = "jsonl") -> None:
    """Write documents back out in an ingestable form (id, date, text)."""
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as f:
            for d in documents:
                rec = {"id": d.id, "date": d.timestamp.isoformat(), "text": d.text}
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["id", "date", "text"])
            for d in documents:
                writer.writerow([d.id, d.timestamp.isoformat(), d.text])
    else:
        raise ValueError(f"format must be 'jsonl' or 'csv', got {format!r}")


@dataclass
class DocTopicTable:
    """Externally computed document-topic shares (doc_id -> topic -> share)."""

    shares: dict[str, dict[str, float]]

    @classmethod
    def from_rows(cls, rows: list[tuple[str, str, float]]) -> "DocTopicTable":
        shares: dict[str, dict[str, float]] = {}
        for doc_id, topic_id, share in rows:
            share = float(share)
            if not 0.0 <= share <= 1.0:
                raise ValueError(f"share {share} for ({doc_id}, {topic_id}) outside [0, 1]")
            per_doc = shares.setdefault(doc_id, {})
            if topic_id in per_doc:
                raise ValueError(f"duplicate (doc, topic) pair ({doc_id}, {topic_id})")
            per_doc[topic_id] = share
        for doc_id, per_doc in shares.items():
            total = sum(per_doc.values())
            if total > 1.0 + 1e-6:
                raise ValueError(f"topic shares for document {doc_id} sum to {total} > 1")
        return cls(shares=shares)

    @classmethod
    def from_csv(cls, path: str) -> "DocTopicTable":
        """Load a table from CSV with header doc_id,topic_id,share."""
        rows = []
        with open(path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            expected = {"doc_id", "topic_id", "share"}
            if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
                raise ValueError(f"{path}: expected CSV header doc_id,topic_id,share")
            for record in reader:
                rows.append((record["doc_id"], record["topic_id"], float(record["share"])))
        return cls.from_rows(rows)

    def topics(self) -> set[str]:
        out: set[str] = set()
        for per_doc in self.shares.values():
            out.update(per_doc)
        return out

    def share(self, doc_id: str, topic_id: str) -> float:
        return self.shares.get(doc_id, {}).get(topic_id, 0.0)


def _empty_like(corpus: SlicedCorpus) -> SlicedCorpus:
    return SlicedCorpus(documents=[], granularity=corpus.granularity, slices=[])


def filter_by_topic_share(
    corpus: SlicedCorpus, table: DocTopicTable, topic: str, min_share: float
) -> SlicedCorpus:
    """Sub-corpus of documents whose share for `topic` is >= min_share.

    The boundary is inclusive: a document at exactly min_share is kept.
    Slice structure is recomputed on the survivors.
    """
    if not 0.0 < min_share <= 1.0:
        raise ValueError(f"min_share must be in (0, 1], got {min_share}")
    known = table.topics()
    if topic not in known:
        raise ValueError(f"unknown topic {topic!r}; known topics: {sorted(known)}")
    kept = [d for d in corpus.documents if table.share(d.id, topic) >= min_share]
    if not kept:
        log.warning("topic filter (%s >= %s) kept no documents", topic, min_share)
        return _empty_like(corpus)
    return assign_time_slices(kept, corpus.granularity)


def filter_by_date_range(corpus: SlicedCorpus, start: dt.date, end: dt.date) -> SlicedCorpus:
    """Sub-corpus of documents with start <= timestamp <= end."""
    if start > end:
        raise ValueError(f"start {start} is after end {end}")
    kept = [d for d in corpus.documents if start <= d.timestamp <= end]
    if not kept:
        log.warning("date filter [%s, %s] kept no documents", start, end)
        return _empty_like(corpus)
    return assign_time_slices(kept, corpus.granularity)
