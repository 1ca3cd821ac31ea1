"""Document ingest, time slicing, and sub-corpus selection."""

import datetime as dt
import json
import random

import pytest

from contextvol import (
    DocTopicTable,
    Document,
    assign_time_slices,
    export_documents,
    filter_by_date_range,
    filter_by_topic_share,
    ingest_documents,
)
from contextvol.corpus import IngestError


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec) + "\n")


class TestIngest:
    def test_three_well_formed_records(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "date": "2009-01-02", "text": "Alpha."},
                {"id": "b", "date": "2009-02-03", "text": "Beta."},
                {"id": "c", "date": "2009-03-04", "text": "Gamma."},
            ],
        )
        docs = ingest_documents(str(path))
        assert [d.id for d in docs] == ["a", "b", "c"]
        assert docs[0].timestamp == dt.date(2009, 1, 2)

    def test_invalid_date_rejected_others_kept(self, tmp_path, caplog):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "date": "2009-01-02", "text": "ok"},
                {"id": "bad", "date": "2009-13-40", "text": "nope"},
                {"id": "c", "date": "2009-03-04", "text": "ok"},
            ],
        )
        with caplog.at_level("WARNING"):
            docs = ingest_documents(str(path))
        assert [d.id for d in docs] == ["a", "c"]
        assert any("invalid date" in r.message for r in caplog.records)

    def test_duplicate_id_fatal(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "date": "2009-01-02", "text": "x"},
                {"id": "a", "date": "2009-01-03", "text": "y"},
            ],
        )
        with pytest.raises(IngestError, match="duplicate"):
            ingest_documents(str(path))

    def test_unreadable_file_fatal(self, tmp_path):
        with pytest.raises(IngestError):
            ingest_documents(str(tmp_path / "missing.jsonl"))

    def test_csv_format_and_field_mapping(self, tmp_path):
        path = tmp_path / "corpus.csv"
        path.write_text(
            "doc,when,body\nx,2010-05-06,Hello there.\ny,2010-06-07,Bye now.\n",
            encoding="utf-8",
        )
        docs = ingest_documents(
            str(path), format="csv", id_field="doc", date_field="when", text_field="body"
        )
        assert [d.id for d in docs] == ["x", "y"]
        assert docs[1].text == "Bye now."

    def test_10k_fixture_matches_line_scan(self, tmp_path):
        rng = random.Random(7)
        path = tmp_path / "big.jsonl"
        records = []
        for i in range(10_000):
            if rng.random() < 0.03:
                records.append({"id": f"r{i}", "date": "not-a-date", "text": "x"})
            elif rng.random() < 0.01:
                records.append({"id": f"r{i}", "text": "missing date"})
            else:
                records.append({"id": f"r{i}", "date": "2011-04-05", "text": f"text {i}"})
        write_jsonl(path, records)

        docs = ingest_documents(str(path))

        # independent line-by-line scan
        expected = 0
        with open(path, encoding="utf-8") as f:
            for line in f:
                rec = json.loads(line)
                if "id" not in rec or "date" not in rec or "text" not in rec:
                    continue
                try:
                    dt.date.fromisoformat(rec["date"])
                except ValueError:
                    continue
                expected += 1
        assert len(docs) == expected

    def test_round_trip_export_reingest(self, tmp_path):
        docs = [
            Document("a", dt.date(2005, 1, 1), "Umlaute:äöü!"),
            Document("b", dt.date(2006, 2, 2), 'quotes "and, commas"'),
        ]
        for fmt in ("jsonl", "csv"):
            path = tmp_path / f"out.{fmt}"
            export_documents(docs, str(path), fmt)
            back = ingest_documents(str(path), fmt)
            assert back == docs


class TestTimeSlices:
    def test_month_gap_keeps_empty_slice(self):
        docs = [
            Document("a", dt.date(2005, 1, 15), "x"),
            Document("b", dt.date(2005, 3, 2), "y"),
        ]
        corpus = assign_time_slices(docs, "month")
        assert corpus.slice_count == 3
        assert corpus.slices[1].doc_ids == []
        assert corpus.slices[0].start == dt.date(2005, 1, 1)
        assert corpus.slices[2].start == dt.date(2005, 3, 1)

    def test_single_document(self):
        corpus = assign_time_slices([Document("a", dt.date(2005, 6, 6), "x")], "month")
        assert corpus.slice_count == 1

    def test_six_year_monthly_fixture(self):
        # 2005-01 .. 2010-12: the calendar oracle says 6 * 12 months
        rng = random.Random(3)
        docs = []
        for i in range(300):
            year = rng.randint(2005, 2010)
            month = rng.randint(1, 12)
            docs.append(Document(f"d{i}", dt.date(year, month, rng.randint(1, 28)), "x"))
        docs.append(Document("first", dt.date(2005, 1, 10), "x"))
        docs.append(Document("last", dt.date(2010, 12, 20), "x"))
        corpus = assign_time_slices(docs, "month")
        assert corpus.slice_count == 72

    @pytest.mark.parametrize(
        "granularity,expected",
        [("year", 2), ("month", 14), ("week", 58), ("day", 400)],
    )
    def test_granularities(self, granularity, expected):
        docs = [
            Document("a", dt.date(2005, 1, 3), "x"),  # a Monday
            Document("b", dt.date(2006, 2, 6), "y"),
        ]
        corpus = assign_time_slices(docs, granularity)
        assert corpus.slice_count == expected

    def test_week_slices_start_on_monday(self):
        docs = [Document("a", dt.date(2021, 1, 7), "x")]  # Thursday
        corpus = assign_time_slices(docs, "week")
        assert corpus.slices[0].start == dt.date(2021, 1, 4)

    def test_partition_property(self):
        rng = random.Random(11)
        docs = [
            Document(f"d{i}", dt.date(2019, rng.randint(1, 12), rng.randint(1, 28)), "x")
            for i in range(100)
        ]
        corpus = assign_time_slices(docs, "month")
        assert sum(len(s.doc_ids) for s in corpus.slices) == len(docs)
        seen = [i for s in corpus.slices for i in s.doc_ids]
        assert len(seen) == len(set(seen))
        for sl in corpus.slices:
            for doc_id in sl.doc_ids:
                assert sl.start <= corpus.document(doc_id).timestamp <= sl.end

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            assign_time_slices([], "month")


def _corpus_of(n=10):
    return assign_time_slices(
        [Document(f"d{i}", dt.date(2020, 1 + i % 3, 5), "x") for i in range(n)], "month"
    )


class TestTopicFilter:
    def test_boundary_share_kept(self):
        # 0.30 must be kept (inclusive boundary), 0.29 dropped
        corpus = _corpus_of(2)
        table = DocTopicTable.from_rows([("d0", "t1", 0.31), ("d1", "t1", 0.29)])
        kept = filter_by_topic_share(corpus, table, "t1", 0.3)
        assert [d.id for d in kept.documents] == ["d0"]

    def test_exact_boundary(self):
        corpus = _corpus_of(1)
        table = DocTopicTable.from_rows([("d0", "t1", 0.3)])
        kept = filter_by_topic_share(corpus, table, "t1", 0.3)
        assert [d.id for d in kept.documents] == ["d0"]

    def test_min_share_one_empty_with_warning(self, caplog):
        corpus = _corpus_of(3)
        table = DocTopicTable.from_rows([(f"d{i}", "t1", 0.5) for i in range(3)])
        with caplog.at_level("WARNING"):
            kept = filter_by_topic_share(corpus, table, "t1", 1.0)
        assert kept.documents == []
        assert any("kept no documents" in r.message for r in caplog.records)

    def test_unknown_topic_fatal_lists_topics(self):
        corpus = _corpus_of(1)
        table = DocTopicTable.from_rows([("d0", "politics", 0.4), ("d0", "sports", 0.4)])
        with pytest.raises(ValueError, match="politics"):
            filter_by_topic_share(corpus, table, "nope", 0.3)

    def test_hundred_doc_fixture_matches_row_scan(self):
        rng = random.Random(5)
        corpus = _corpus_of(100)
        rows = [(f"d{i}", "t1", round(rng.random(), 3)) for i in range(100)]
        table = DocTopicTable.from_rows(rows)
        kept = filter_by_topic_share(corpus, table, "t1", 0.3)
        expected = {doc for doc, _, share in rows if share >= 0.3}
        assert {d.id for d in kept.documents} == expected

    def test_monotone_in_min_share(self):
        rng = random.Random(6)
        corpus = _corpus_of(50)
        table = DocTopicTable.from_rows([(f"d{i}", "t1", rng.random()) for i in range(50)])
        low = {d.id for d in filter_by_topic_share(corpus, table, "t1", 0.2).documents}
        high = {d.id for d in filter_by_topic_share(corpus, table, "t1", 0.7).documents}
        assert high <= low

    def test_invalid_min_share(self):
        corpus = _corpus_of(1)
        table = DocTopicTable.from_rows([("d0", "t1", 0.5)])
        for bad in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                filter_by_topic_share(corpus, table, "t1", bad)


class TestDocTopicTable:
    def test_from_csv(self, tmp_path):
        path = tmp_path / "topics.csv"
        path.write_text("doc_id,topic_id,share\nd0,t1,0.4\nd0,t2,0.5\n", encoding="utf-8")
        table = DocTopicTable.from_csv(str(path))
        assert table.share("d0", "t1") == 0.4
        assert table.topics() == {"t1", "t2"}

    def test_duplicate_pair_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            DocTopicTable.from_rows([("d0", "t1", 0.4), ("d0", "t1", 0.5)])

    def test_share_sum_over_one_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            DocTopicTable.from_rows([("d0", "t1", 0.7), ("d0", "t2", 0.7)])


class TestDateFilter:
    def test_identity_when_range_covers_all(self):
        corpus = _corpus_of(10)
        kept = filter_by_date_range(corpus, dt.date(2019, 1, 1), dt.date(2021, 1, 1))
        assert [d.id for d in kept.documents] == [d.id for d in corpus.documents]

    def test_empty_range_warns(self, caplog):
        corpus = _corpus_of(10)
        with caplog.at_level("WARNING"):
            kept = filter_by_date_range(corpus, dt.date(1990, 1, 1), dt.date(1990, 12, 31))
        assert kept.documents == []

    def test_mixed_fixture_matches_scan(self):
        rng = random.Random(9)
        docs = [
            Document(f"d{i}", dt.date(2020, rng.randint(1, 12), rng.randint(1, 28)), "x")
            for i in range(80)
        ]
        corpus = assign_time_slices(docs, "month")
        start, end = dt.date(2020, 3, 10), dt.date(2020, 9, 20)
        kept = filter_by_date_range(corpus, start, end)
        expected = {d.id for d in docs if start <= d.timestamp <= end}
        assert {d.id for d in kept.documents} == expected

    def test_start_after_end_rejected(self):
        corpus = _corpus_of(1)
        with pytest.raises(ValueError):
            filter_by_date_range(corpus, dt.date(2021, 1, 1), dt.date(2020, 1, 1))
