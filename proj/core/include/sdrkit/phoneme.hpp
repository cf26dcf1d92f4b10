/*
 * Copyright 2026 The sdrkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/metrics.hpp"

namespace sdrkit {

enum class PhonemeCategory { kPlosive, kFricative, kApproximant, kNasal, kVowel, kOther };

// Table order of the five analysed categories.
inline constexpr PhonemeCategory kAnalysedCategories[] = {
    PhonemeCategory::kPlosive, PhonemeCategory::kFricative, PhonemeCategory::kApproximant,
    PhonemeCategory::kNasal, PhonemeCategory::kVowel};

std::string_view CategoryName(PhonemeCategory c);

// ARPAbet lookup after stripping stress digits. Affricates, silence and
// anything unrecognised map to kOther.
PhonemeCategory Categorize(std::string_view phone);

// True for any ARPAbet phone or silence marker this table knows about,
// including the ones deliberately mapped to kOther.
bool IsKnownPhone(std::string_view phone);

struct PhonemeSegment {
  double start = 0.0;  // seconds
  double end = 0.0;
  std::string label;
  PhonemeCategory category = PhonemeCategory::kOther;
};

struct Alignment {
  std::vector<PhonemeSegment> segments;  // sorted, non-overlapping
  std::size_t unknown_phones = 0;
};

// CSV with header "start,end,phone". Rows may come in any order; reversed
// or overlapping segments are errors.
Alignment ParseAlignment(std::istream& in);
Alignment LoadAlignment(const std::filesystem::path& path);

enum class CategoryAggregation {
  kConcatenate,  // splice all spans of a category, then measure once
  kSegmentMean,  // measure each span, average the reports
};

struct CategoryRow {
  PhonemeCategory category = PhonemeCategory::kOther;
  MetricReport report;  // STOI left empty
};

struct CategoryTable {
  std::vector<CategoryRow> rows;  // only categories with nonzero duration
  std::size_t truncated_segments = 0;
};

CategoryTable PerCategoryMetrics(std::span<const double> est, std::span<const double> mixture,
                                 std::span<const double> clean, std::span<const double> noise,
                                 int sample_rate, std::span<const PhonemeSegment> segments,
                                 const MetricConfig& config = {},
                                 CategoryAggregation mode = CategoryAggregation::kConcatenate);

// Field-wise mean of per-utterance rows, per category present anywhere.
CategoryTable AverageTables(std::span<const CategoryTable> tables);

std::string PhonemeCsvHeader();
std::string PhonemeCsvRow(std::string_view loss_label, const CategoryRow& row);

}  // namespace sdrkit
