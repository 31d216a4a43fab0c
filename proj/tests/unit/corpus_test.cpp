// Copyright 2026 The mgtkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgtkit/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "mgtkit/error.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/text.hpp"
#include "support/testing.hpp"

namespace mgt {
namespace {

using ::testing::HasSubstr;
using ::testing::ThrowsMessage;

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " w" : "w") + std::to_string(i);
  return s;
}

// One record per group, label alternating so both classes appear.
Dataset singles(const std::vector<std::size_t>& counts, Label label = Label::HWT) {
  Dataset ds{"t", {}};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::string g = "g" + std::to_string(i);
    ds.records.push_back({g, words(counts[i]), label, "t", g});
  }
  return ds;
}

Dataset pairs(std::size_t groups) {
  Dataset ds{"t", {}};
  for (std::size_t i = 0; i < groups; ++i) {
    const std::string g = "q" + std::to_string(i);
    ds.records.push_back({g + ":HWT", "human answer " + g, Label::HWT, "t", g});
    ds.records.push_back({g + ":MGT", "machine answer " + g, Label::MGT, "t", g});
  }
  return ds;
}

std::vector<std::size_t> word_counts(const Dataset& ds) {
  std::vector<std::size_t> out;
  for (const auto& r : ds.records) out.push_back(count_words(r.text));
  return out;
}

TEST(CountWords, Examples) {
  EXPECT_EQ(count_words(""), 0u);
  EXPECT_EQ(count_words("Tesla died on 7 January 1943."), 6u);
  EXPECT_EQ(count_words("a  b\tc"), 3u);
  EXPECT_EQ(count_words("   "), 0u);
  EXPECT_EQ(count_words("\n lead and trail \r\n"), 3u);
}

TEST(CountWords, UnicodeWhitespaceSeparates) {
  // NO-BREAK SPACE, EM SPACE and IDEOGRAPHIC SPACE are White_Space.
  EXPECT_EQ(count_words("a b c　d"), 4u);
  // ZERO WIDTH SPACE is not.
  EXPECT_EQ(count_words("a​b"), 1u);
  EXPECT_EQ(count_words("café naïve"), 2u);
}

TEST(CountWords, AgreesWithSplit) {
  const std::string text = "x y  z\u0085w";
  EXPECT_EQ(split_words(text), (std::vector<std::string>{"x", "y", "z", "w"}));
  EXPECT_EQ(count_words(text), split_words(text).size());
}

TEST(LoadPaired, SingleLineMakesTwoRecords) {
  std::istringstream in(
      R"({"id":"q1","human_answer":"Paris.","machine_answer":"The capital of France is Paris."})"
      "\n");
  const Dataset ds = parse_paired(in, "qa");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.records[0].id, "q1:HWT");
  EXPECT_EQ(ds.records[0].label, Label::HWT);
  EXPECT_EQ(ds.records[0].text, "Paris.");
  EXPECT_EQ(ds.records[1].id, "q1:MGT");
  EXPECT_EQ(ds.records[1].label, Label::MGT);
  EXPECT_EQ(ds.records[0].group_id, "q1");
  EXPECT_EQ(ds.records[1].group_id, "q1");
  EXPECT_EQ(ds.records[1].source, "qa");
}

TEST(LoadPaired, DuplicateIdIsRejected) {
  std::istringstream in(
      R"({"id":"q1","human_answer":"a","machine_answer":"b"})"
      "\n"
      R"({"id":"q1","human_answer":"c","machine_answer":"d"})"
      "\n");
  EXPECT_THAT([&] { parse_paired(in, "qa"); },
              ThrowsMessage<Error>(HasSubstr("duplicate id")));
}

TEST(LoadPaired, MalformedLineNamesLineNumber) {
  std::istringstream in(
      R"({"id":"q1","human_answer":"a","machine_answer":"b"})"
      "\n\n"
      "{not json\n");
  EXPECT_THAT([&] { parse_paired(in, "qa"); }, ThrowsMessage<Error>(HasSubstr("line 3")));
  std::istringstream missing(R"({"id":"q1","human_answer":"a"})");
  EXPECT_THAT([&] { parse_paired(missing, "qa"); },
              ThrowsMessage<Error>(HasSubstr("machine_answer")));
}

TEST(LoadPaired, EmptyFileIsRejected) {
  std::istringstream in("\n\n");
  EXPECT_THAT([&] { parse_paired(in, "qa"); },
              ThrowsMessage<Error>(HasSubstr("empty dataset file")));
}

TEST(LoadPaired, RecordCountIsTwiceLineCount) {
  testing_util::TempDir dir;
  std::string content;
  for (int i = 0; i < 817; ++i) {
    content += fmt::format(
        R"({{"id":"tqa{}","question":"Q{}?","human_answer":"h {}","machine_answer":"m {} m"}})",
        i, i, i, i);
    content += '\n';
  }
  testing_util::write_file(dir / "tqa.jsonl", content);
  const Dataset ds = load_paired(dir / "tqa.jsonl");
  EXPECT_EQ(ds.size(), 2u * 817u);
  EXPECT_EQ(ds.count(Label::HWT), 817u);
  EXPECT_EQ(ds.count(Label::MGT), 817u);
}

TEST(Normalized, RoundTrip) {
  testing_util::TempDir dir;
  Dataset ds = pairs(3);
  ds.records[0].text = "quote \" backslash \\ tab\t unicode é中";
  write_normalized(dir / "n.jsonl", ds);
  const Dataset back = load_normalized(dir / "n.jsonl");
  EXPECT_EQ(back.records, ds.records);
  EXPECT_EQ(back.name, "t");

  // Writing again is byte-identical.
  std::ostringstream a, b;
  write_normalized(a, ds);
  write_normalized(b, back);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Normalized, KeyOrderIsFixed) {
  std::ostringstream out;
  write_normalized(out, Dataset{"s", {{"q:HWT", "hi there", Label::HWT, "s", "q"}}});
  EXPECT_EQ(out.str(),
            R"({"id":"q:HWT","group_id":"q","label":"HWT","text":"hi there","source":"s"})"
            "\n");
}

TEST(Normalized, BadLabelIsRejected) {
  std::istringstream in(R"({"id":"a","group_id":"a","label":"XYZ","text":"t","source":"s"})");
  EXPECT_THAT([&] { parse_normalized(in, "s"); }, ThrowsMessage<Error>(HasSubstr("line 1")));
}

TEST(FilterMinWords, Examples) {
  EXPECT_EQ(word_counts(filter_min_words(singles({1, 2, 30}))),
            (std::vector<std::size_t>{2, 30}));
  Dataset pair{"t", {{"g:HWT", words(1), Label::HWT, "t", "g"},
                     {"g:MGT", words(40), Label::MGT, "t", "g"}}};
  EXPECT_TRUE(filter_min_words(pair).empty());
  EXPECT_TRUE(filter_min_words(Dataset{}).empty());
}

TEST(FilterMaxWords, Examples) {
  EXPECT_EQ(word_counts(filter_max_words(singles({10, 25, 26}))),
            (std::vector<std::size_t>{10, 25}));
  EXPECT_TRUE(filter_max_words(singles({26, 40, 99}, Label::MGT)).empty());
}

TEST(Filters, IdempotentAndSubset) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset ds{"t", {}};
    for (int g = 0; g < 20; ++g) {
      const std::string id = "g" + std::to_string(g);
      ds.records.push_back({id + ":HWT", words(rng.below(40)), Label::HWT, "t", id});
      ds.records.push_back({id + ":MGT", words(rng.below(40)), Label::MGT, "t", id});
    }
    for (auto f : {+[](const Dataset& d) { return filter_min_words(d, 5); },
                   +[](const Dataset& d) { return filter_max_words(d, 25); }}) {
      const Dataset once = f(ds);
      EXPECT_EQ(f(once).records, once.records);
      for (const auto& r : once.records) {
        EXPECT_NE(std::find(ds.records.begin(), ds.records.end(), r), ds.records.end());
      }
      // Groups survive whole.
      EXPECT_EQ(once.count(Label::HWT), once.count(Label::MGT));
    }
  }
}

TEST(Split, TenGroupsGoEightTwo) {
  const auto [train, test] = split(pairs(10), {4, 5, 17});
  EXPECT_EQ(train.size(), 16u);
  EXPECT_EQ(test.size(), 4u);
}

TEST(Split, SameSeedSamePartition) {
  const Dataset ds = pairs(37);
  const auto a = split(ds, {4, 5, 99});
  const auto b = split(ds, {4, 5, 99});
  EXPECT_EQ(a.first.records, b.first.records);
  EXPECT_EQ(a.second.records, b.second.records);
  const auto c = split(ds, {4, 5, 100});
  EXPECT_NE(a.first.records, c.first.records);
}

TEST(Split, PartitionPropertyByMembership) {
  const Dataset ds = pairs(5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto [train, test] = split(ds, {4, 5, seed});
    std::set<std::string> train_groups, test_groups;
    for (const auto& r : train.records) train_groups.insert(r.group_id);
    for (const auto& r : test.records) test_groups.insert(r.group_id);
    ASSERT_EQ(train_groups.size(), 4u);
    ASSERT_EQ(test_groups.size(), 1u);
    for (const auto& r : ds.records) {
      const bool in_train = train_groups.count(r.group_id) > 0;
      const bool in_test = test_groups.count(r.group_id) > 0;
      ASSERT_NE(in_train, in_test) << r.id;
      const auto& side = in_train ? train.records : test.records;
      ASSERT_EQ(std::count(side.begin(), side.end(), r), 1) << r.id;
    }
    ASSERT_EQ(train.size() + test.size(), ds.size());
  }
}

TEST(Split, ReferenceShuffle) {
  // Fisher-Yates from the top index down with SplitMix64::below, written
  // out here as the reference; the first ceil(4/5 * 7) = 6 groups train.
  const Dataset ds = pairs(7);
  std::vector<std::string> groups;
  for (int i = 0; i < 7; ++i) groups.push_back("q" + std::to_string(i));
  SplitMix64 rng(2024);
  for (std::size_t i = groups.size() - 1; i > 0; --i) {
    std::swap(groups[i], groups[rng.below(i + 1)]);
  }
  const auto [train, test] = split(ds, {4, 5, 2024});
  ASSERT_EQ(test.size(), 2u);
  EXPECT_EQ(test.records[0].group_id, groups[6]);
}

TEST(Split, DegenerateSplitIsRejected) {
  EXPECT_THAT([] { split(pairs(1), {4, 5, 0}); },
              ThrowsMessage<Error>(HasSubstr("degenerate split")));
}

TEST(Histogram, Examples) {
  const auto one = word_count_histogram(singles({3}));
  EXPECT_EQ(one.at(Label::HWT), (Histogram{{0, 1}}));
  EXPECT_TRUE(one.count(Label::MGT) == 0 || one.at(Label::MGT).empty());

  const auto two = word_count_histogram(singles({3, 7}), 5);
  EXPECT_EQ(two.at(Label::HWT), (Histogram{{0, 1}, {5, 1}}));
}

TEST(Histogram, BucketSumsMatchCounts) {
  SplitMix64 rng(8);
  Dataset ds{"t", {}};
  for (int i = 0; i < 300; ++i) {
    const std::string id = "r" + std::to_string(i);
    ds.records.push_back({id, words(1 + rng.below(80)), rng.below(2) ? Label::MGT : Label::HWT,
                          "t", id});
  }
  for (const auto& [label, hist] : word_count_histogram(ds, 7)) {
    std::size_t sum = 0;
    for (const auto& [lo, n] : hist) {
      EXPECT_EQ(lo % 7, 0u);
      sum += n;
    }
    EXPECT_EQ(sum, ds.count(label));
  }
}

}  // namespace
}  // namespace mgt
