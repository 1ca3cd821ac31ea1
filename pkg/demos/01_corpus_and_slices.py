"""Ingest time-stamped documents and partition them into calendar slices.

Run with:  python demos/01_corpus_and_slices.py
"""

import datetime as dt
import json
import tempfile

from contextvol import (
    DocTopicTable,
    assign_time_slices,
    filter_by_date_range,
    filter_by_topic_share,
    ingest_documents,
)

# --- write a tiny JSON-Lines corpus -----------------------------------------
# One object per line with id/date/text fields (names are remappable).

records = [
    {"id": "a1", "date": "2009-01-05", "text": "Die Bank vergibt einen Kredit."},
    {"id": "a2", "date": "2009-01-19", "text": "Der Zins steigt. Die Bank warnt."},
    {"id": "a3", "date": "2009-03-02", "text": "Faule Kredite belasten Banken."},
    {"id": "a4", "date": "2009-04-11", "text": "Die Schulden wachsen weiter."},
    {"id": "bad", "date": "2009-13-40", "text": "invalid date, will be skipped"},
]
corpus_file = tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False)
for record in records:
    corpus_file.write(json.dumps(record) + "\n")
corpus_file.close()

documents = ingest_documents(corpus_file.name)
print(f"ingested {len(documents)} documents (1 rejected for its date)")

# --- monthly slices ----------------------------------------------------------
# Slices are aligned to calendar units and cover the full span; the empty
# February slice is kept so indices line up with calendar time.

corpus = assign_time_slices(documents, granularity="month")
print(f"\n{corpus.slice_count} monthly slices:")
for sl in corpus.slices:
    print(f"  slice {sl.index}: {sl.start} .. {sl.end}  docs={sl.doc_ids}")

# --- sub-corpus selection ----------------------------------------------------

spring = filter_by_date_range(corpus, dt.date(2009, 3, 1), dt.date(2009, 4, 30))
print(f"\ndate filter kept {[d.id for d in spring.documents]}")

# Topic shares come from an external model (CSV: doc_id,topic_id,share).
table = DocTopicTable.from_rows(
    [("a1", "finance", 0.65), ("a2", "finance", 0.30), ("a3", "finance", 0.81),
     ("a4", "finance", 0.12)]
)
financial = filter_by_topic_share(corpus, table, "finance", min_share=0.30)
print(f"topic filter (finance >= 0.30) kept {[d.id for d in financial.documents]}")
print("note: the 0.30 boundary document a2 is kept (threshold is inclusive)")
