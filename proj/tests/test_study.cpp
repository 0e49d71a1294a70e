#include <doctest.h>

#include <algorithm>
#include <random>

#include "hcivalue/error.hpp"
#include "hcivalue/info.hpp"
#include "hcivalue/study.hpp"

using namespace hcivalue;

namespace {

const StudyDesign three_bit({{"S1", 1}, {"S2", 1}, {"S3", 1}}, "111");

const std::vector<std::pair<std::string, int>> reference_mix = {
    {"111", 683}, {"110", 107}, {"011", 103}, {"101", 46}, {"010", 25}, {"001", 17}, {"100", 11}, {"000", 8}};

std::vector<TrialRecord> records_from(const std::vector<std::pair<std::string, int>>& counts,
                                      const std::string& truth = "111", double ms = 2000.0) {
  std::vector<TrialRecord> out;
  int n = 0;
  for (const auto& [response, count] : counts) {
    for (int i = 0; i < count; ++i, ++n) {
      out.push_back({"p" + std::to_string(n % 25), "t" + std::to_string(n), truth, response, ms});
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("build_stage_alphabets") {
  TEST_CASE("three-bit design") {
    const auto s = build_stage_alphabets(three_bit, "111", {{"111", 1.0}});
    CHECK(s.a1.probability("111") == doctest::Approx(0.993701).epsilon(1e-12));
    CHECK(s.a1.probability("000") == doctest::Approx(0.006299 / 7).epsilon(1e-12));
    CHECK(entropy(s.a2) == 3.0);
    for (double p : s.a2.probabilities()) CHECK(p == 0.125);
    CHECK(s.a4.probability("111") == 1.0);
    CHECK(s.a4.probability("010") == 0.0);
    CHECK(s.a1.labels() == s.a2.labels());
    CHECK(s.a3.labels() == s.a4.labels());
  }

  TEST_CASE("counts are normalized") {
    const auto s = build_stage_alphabets(three_bit, "110", {{"111", 3.0}, {"000", 1.0}});
    CHECK(s.a4.probability("111") == 0.75);
    CHECK(s.a3.probability("110") == doctest::Approx(0.993701));
  }

  TEST_CASE("bad bit strings") {
    CHECK_THROWS_AS(build_stage_alphabets(three_bit, "11", {{"111", 1.0}}), FormatError);
    CHECK_THROWS_AS(build_stage_alphabets(three_bit, "111", {{"1x1", 1.0}}), FormatError);
  }
}

TEST_SUITE("study_cost_benefit") {
  TEST_CASE("replication of the reference response mix") {
    const auto records = records_from(reference_mix);
    const auto r = study_cost_benefit(three_bit, records);
    CHECK(r.question_entropy == 3.0);
    CHECK(r.decision_entropy == doctest::Approx(0.0727922398580064).epsilon(1e-12));
    CHECK(r.alphabet_compression == doctest::Approx(3.0 - 0.0727922398580064).epsilon(1e-12));
    CHECK(r.potential_distortion == doctest::Approx(1.590572351012768).epsilon(1e-12));
    CHECK(r.benefit == doctest::Approx(1.336635409129225).epsilon(1e-12));
    CHECK(r.response_entropy == doctest::Approx(1.6230652642459).epsilon(1e-11));
    CHECK(r.potential_distortion >= 1.583);
    CHECK(r.potential_distortion <= 1.603);
    CHECK(r.benefit >= 1.325);
    CHECK(r.benefit <= 1.345);
    CHECK(r.benefit == doctest::Approx(r.alphabet_compression - r.potential_distortion).epsilon(1e-12));
    CHECK(r.mean_response_time_s == 2.0);
    CHECK(r.cost_benefit == doctest::Approx(r.benefit / 2.0));
    CHECK(r.records == 1000);
    CHECK(r.groups == 1);
  }

  TEST_CASE("aggregate mode uses the response entropy") {
    const auto r = study_cost_benefit(three_bit.with_mode(AggregationMode::random_team_or_single_participant),
                                      records_from(reference_mix));
    CHECK(r.alphabet_compression == doctest::Approx(3.0 - 1.6230652642459).epsilon(1e-11));
  }

  TEST_CASE("all answers correct") {
    const auto design = three_bit.with_epsilon(EpsilonPolicy(1e-9));
    const auto r = study_cost_benefit(design, records_from({{"111", 50}}));
    CHECK(r.potential_distortion == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(r.benefit == doctest::Approx(r.alphabet_compression).epsilon(1e-12));
    CHECK(r.alphabet_compression == doctest::Approx(3.0).epsilon(1e-6));
  }

  TEST_CASE("yes-no question, every answer wrong") {
    const StudyDesign yes_no({{"Q", 1}}, "1");
    const auto r = study_cost_benefit(yes_no, records_from({{"0", 40}}, "1"));
    // 1 - H(eps) and 1 - H(eps) - D_max, both from direct evaluation with mpmath
    CHECK(r.alphabet_compression == doctest::Approx(0.944891288796034).epsilon(1e-12));
    CHECK(r.potential_distortion == doctest::Approx(7.209560329048915).epsilon(1e-12));
    CHECK(r.benefit == doctest::Approx(-6.26466904025288).epsilon(1e-12));
    CHECK(r.benefit < 0.0);
  }

  TEST_CASE("stimulus bound") {
    const StudyDesign d({{"S", 2}}, "10", {}, AggregationMode::consistent_individual, 64);
    const auto r = study_cost_benefit(d, records_from({{"10", 3}}, "10"));
    REQUIRE(r.stimulus_entropy_bound);
    CHECK(*r.stimulus_entropy_bound == 6.0);
  }

  TEST_CASE("mixed ground truths are weighted by group size") {
    auto records = records_from(reference_mix);
    const auto other = records_from({{"000", 300}, {"001", 100}}, "000");
    records.insert(records.end(), other.begin(), other.end());
    const auto r = study_cost_benefit(three_bit, records);
    const auto r1 = study_cost_benefit(three_bit, records_from(reference_mix));
    const auto r2 = study_cost_benefit(three_bit, other);
    CHECK(r.groups == 2);
    CHECK(r.potential_distortion ==
          doctest::Approx((1000 * r1.potential_distortion + 400 * r2.potential_distortion) / 1400).epsilon(1e-12));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(study_cost_benefit(three_bit, std::vector<TrialRecord>{}), DomainError);
    CHECK_THROWS_AS(study_cost_benefit(three_bit, records_from({{"11", 2}})), ValidationError);
    auto bad_time = records_from({{"111", 1}});
    bad_time[0].response_time_ms = 0.0;
    CHECK_THROWS_AS(study_cost_benefit(three_bit, bad_time), ValidationError);
  }

  TEST_CASE("property: consistent-mode compression ignores the responses") {
    std::mt19937_64 rng(17);
    const auto letters = bit_string_labels(3);
    const double expected = study_cost_benefit(three_bit, records_from(reference_mix)).alphabet_compression;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::pair<std::string, int>> counts;
      for (const auto& l : letters) {
        if (rng() % 3 != 0) counts.emplace_back(l, static_cast<int>(1 + rng() % 50));
      }
      if (counts.empty()) counts.emplace_back(letters[rng() % 8], 1);
      CHECK(study_cost_benefit(three_bit, records_from(counts)).alphabet_compression == expected);
    }
  }

  TEST_CASE("property: record order and participant names do not matter") {
    auto records = records_from(reference_mix);
    for (std::size_t i = 0; i < records.size(); ++i) records[i].response_time_ms = 1000.0 + (i * 37) % 2000;
    const auto base = study_cost_benefit(three_bit, records);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(records.begin(), records.end(), rng);
      for (auto& r : records) r.participant_id = "x" + std::to_string(rng() % 1000);
      const auto again = study_cost_benefit(three_bit, records);
      CHECK(again.benefit == base.benefit);
      CHECK(again.mean_response_time_s == base.mean_response_time_s);
      CHECK(again.cost_benefit == base.cost_benefit);
    }
  }

  TEST_CASE("property: moving mass off the truth lowers the benefit") {
    for (const auto& wrong : bit_string_labels(3)) {
      if (wrong == "111") continue;
      double previous = study_cost_benefit(three_bit, records_from({{"111", 100}})).benefit;
      for (int moved = 5; moved <= 100; moved += 5) {
        const double b = study_cost_benefit(three_bit, records_from({{"111", 100 - moved}, {wrong, moved}})).benefit;
        CHECK(b <= previous + 1e-12);
        previous = b;
      }
    }
  }
}

TEST_SUITE("per_submodel_accuracy") {
  TEST_CASE("reference response mix") {
    const auto acc = per_submodel_accuracy(three_bit, records_from(reference_mix));
    CHECK(acc.at("S1") == doctest::Approx(0.847).epsilon(1e-12));
    CHECK(acc.at("S2") == doctest::Approx((683 + 107 + 103 + 25) / 1000.0).epsilon(1e-12));
    CHECK(acc.at("S3") == doctest::Approx((683 + 103 + 46 + 17) / 1000.0).epsilon(1e-12));
  }

  TEST_CASE("all correct and uniform") {
    for (const auto& [_, a] : per_submodel_accuracy(three_bit, records_from({{"111", 9}}))) CHECK(a == 1.0);
    std::vector<std::pair<std::string, int>> uniform;
    for (const auto& l : bit_string_labels(3)) uniform.emplace_back(l, 4);
    for (const auto& [_, a] : per_submodel_accuracy(three_bit, records_from(uniform))) CHECK(a == 0.5);
  }

  TEST_CASE("multi-bit slices") {
    const StudyDesign d({{"A", 2}, {"B", 1}}, "101");
    const std::vector<TrialRecord> r = {{"p", "t1", "101", "100", 1.0}, {"p", "t2", "101", "111", 1.0}};
    const auto acc = per_submodel_accuracy(d, r);
    CHECK(acc.at("A") == 0.5);
    CHECK(acc.at("B") == 0.5);
  }
}

TEST_SUITE("ingest_trials") {
  TEST_CASE("one row") {
    const auto r = ingest_trials("participant,trial,ground_truth,response,response_time_ms\np1,t1,111,110,2300\n");
    REQUIRE(r.size() == 1);
    CHECK(r[0].participant_id == "p1");
    CHECK(r[0].response == "110");
    CHECK(r[0].response_time_ms / 1000.0 == 2.3);
  }

  TEST_CASE("CRLF, BOM and a missing final newline") {
    const auto r = ingest_trials("\xEF\xBB\xBFparticipant,trial,ground_truth,response,response_time_ms\r\n"
                                 "p1,t1,111,110,2300\r\np2,t1,111,111,1900");
    CHECK(r.size() == 2);
    CHECK(r[1].response_time_ms == 1900.0);
  }

  TEST_CASE("row errors are collected with line numbers") {
    const std::string csv =
        "participant,trial,ground_truth,response,response_time_ms\n"
        "p1,t1,111,110,2300\n"
        "p1,t2,111,11,2300\n"
        "p1,t3,111,110,-4\n"
        "p1,t4,111,110\n";
    try {
      ingest_trials(csv, 3);
      FAIL("expected an IngestError");
    } catch (const IngestError& e) {
      REQUIRE(e.rows().size() == 3);
      CHECK(e.rows()[0].line == 3);
      CHECK(e.rows()[1].line == 4);
      CHECK(e.rows()[2].line == 5);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("header and empty input") {
    CHECK_THROWS_AS(ingest_trials("participant,trial,truth,response,time\np1,t1,1,1,5\n"), FormatError);
    CHECK_THROWS_WITH_AS(ingest_trials(""), doctest::Contains("no records"), DomainError);
    CHECK_THROWS_WITH_AS(ingest_trials(std::string(kTrialCsvHeader) + "\n"), doctest::Contains("no records"),
                         DomainError);
  }
}
