import json
import math

import pytest

from mbfix.burnside import (EXPECTED_TABLE_SHA256, PAPER_FIX_TABLES,
                            PUBLISHED_RN, PaperTable, class_count,
                            table_checksum, verify_paper_tables)
from mbfix.errors import OutOfScopeError
from mbfix.mbf import dedekind
from mbfix.perm import class_size, cycle_type, parse_cycles


class TestPaperTable:
    def test_checksum_frozen(self):
        assert table_checksum() == EXPECTED_TABLE_SHA256
        assert PaperTable.checksum_ok()

    def test_row_counts_match_printed_tables(self):
        assert {n: len(rows) for n, rows in PAPER_FIX_TABLES.items()} == {
            3: 3, 4: 5, 5: 7, 6: 11, 7: 15, 8: 22}

    def test_published_dn_rn_reach_n8(self):
        assert PaperTable.dn(8) == 56_130_437_228_687_557_907_788
        assert PaperTable.rn(8) == 1_392_195_548_889_993_358

    def test_only_known_misprints_flagged(self):
        flagged_fix = [(n, r.perm) for n, rows in PAPER_FIX_TABLES.items()
                       for r in rows if r.fix_corrected is not None]
        assert flagged_fix == [(6, "(12)(34)(56)"), (7, "(12)(34)(56)")]

    def test_printed_mu_vs_formula(self):
        # the n=7 mu column and one n=8 entry disagree with the class
        # size formula; everything else agrees
        for n, rows in PAPER_FIX_TABLES.items():
            for row in rows:
                formula = class_size(cycle_type(parse_cycles(row.perm, n)))
                if row.mu_corrected is not None:
                    assert formula == row.mu_corrected != row.mu_printed
                else:
                    assert formula == row.mu_printed, (n, row.perm)

    def test_embedded_tables_satisfy_burnside_wholesale(self):
        # A single mistyped digit anywhere in the embedded data breaks
        # either divisibility by n! or the published quotient, so this
        # covers the rows (all of n=8 included) that the engines never
        # recompute.
        for n, rows in PAPER_FIX_TABLES.items():
            total = 0
            for row in rows:
                mu = class_size(cycle_type(parse_cycles(row.perm, n)))
                fix = (row.fix_corrected if row.fix_corrected is not None
                       else row.fix_printed)
                total += mu * fix
            fact = math.factorial(n)
            assert total % fact == 0, n
            assert total // fact == PUBLISHED_RN[n], n

    def test_identity_rows_equal_published_dn(self):
        from mbfix.burnside import PUBLISHED_DN
        for n, rows in PAPER_FIX_TABLES.items():
            assert rows[0].perm == "e"
            assert rows[0].fix_printed == PUBLISHED_DN[n]


class TestClassCount:
    def test_r2_worked_example(self):
        ledger = class_count(2)
        assert ledger.total == 6 + 4
        assert ledger.r == 5

    def test_small_values(self):
        for n in range(6):
            assert class_count(n).r == PUBLISHED_RN[n]

    def test_r5_totals(self):
        ledger = class_count(5)
        assert ledger.total == 25_200
        assert ledger.factorial == 120
        assert ledger.r == 210

    def test_mu_sums_to_factorial(self):
        for n in (4, 5, 6):
            ledger = class_count(n)
            assert sum(row.mu for row in ledger.rows) == math.factorial(n)

    def test_divisibility_is_checked(self):
        for n in range(7):
            ledger = class_count(n)
            assert ledger.total == ledger.r * ledger.factorial

    def test_r_bounds(self):
        for n in range(7):
            r = class_count(n).r
            d = dedekind(n)
            assert d / math.factorial(n) <= r <= d

    def test_r8_refused_naming_rows(self):
        with pytest.raises(OutOfScopeError) as err:
            class_count(8)
        msg = str(err.value)
        assert "(12)" in msg and "e" in msg

    def test_ledger_json_round_trips(self):
        data = class_count(4).to_json_dict()
        blob = json.dumps(data, sort_keys=True)
        assert json.dumps(json.loads(blob), sort_keys=True) == blob
        assert data["r"] == "30"
        assert all(isinstance(row["fix"], str) for row in data["rows"])


class TestVerifyTables:
    def test_n4_all_pass(self):
        rows = verify_paper_tables(4, 4)
        fix_rows = [r for r in rows if not r.item.startswith(("d_", "r_"))]
        assert len(fix_rows) == 5
        assert all(r.status == "PASS" for r in fix_rows)

    def test_n6_flags_the_misprint(self):
        rows = verify_paper_tables(6, 6)
        by_item = {r.item: r for r in rows}
        bad = by_item["(12)(34)(56)"]
        assert bad.status == "MISPRINT"
        assert bad.printed == 860 and bad.computed == 8600
        others = [r for r in rows if r.item not in ("(12)(34)(56)",)]
        assert all(r.status == "PASS" for r in others)

    def test_n8_spot_row_passes(self):
        rows = verify_paper_tables(8, 8)
        by_item = {r.item: r for r in rows}
        assert by_item["(123)(45678)"].status == "PASS"
        assert by_item["(123)(45678)"].computed == 870
        assert by_item["(12345678)"].status == "PASS"
        skipped = {r.item for r in rows if r.status == "SKIPPED"}
        assert "e" in skipped and "(12)" in skipped

    def test_n7_mu_annotations(self):
        rows = verify_paper_tables(7, 7)
        by_item = {r.item: r for r in rows}
        assert by_item["(12)"].mu_printed == 15
        assert by_item["(12)"].mu_formula == 21
        bad = by_item["(12)(34)(56)"]
        assert bad.status == "MISPRINT"
        assert bad.computed == 12_015_832
        assert by_item["r_7"].status == "PASS"
