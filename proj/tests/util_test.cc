// Copyright 2026 The Podjudge Authors.
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

#include <fstream>

#include "doctest.h"
#include "podjudge/errors.h"
#include "podjudge/util.h"
#include "test_support.h"

namespace podjudge {
namespace {

TEST_CASE("RFC 3339 parsing normalizes to UTC") {
  const auto utc = ParseRfc3339("2026-03-01T12:00:00Z");
  CHECK(ParseRfc3339("2026-03-01T14:30:00+02:30") == utc);
  CHECK(ParseRfc3339("2026-03-01T07:00:00-05:00") == utc);
  CHECK(ParseRfc3339("2026-03-01t12:00:00z") == utc);
  CHECK(ParseRfc3339("2026-03-01T12:00:00.250Z") - utc == std::chrono::milliseconds(250));
  CHECK(FormatRfc3339(utc) == "2026-03-01T12:00:00Z");
  CHECK(FormatRfc3339(utc + std::chrono::milliseconds(7)) == "2026-03-01T12:00:00.007Z");
  for (const char* bad : {"", "2026-03-01", "2026-03-01T12:00:00", "2026-13-01T00:00:00Z",
                          "2026-02-30T00:00:00Z", "2026-03-01T25:00:00Z", "yesterday"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(ParseRfc3339(bad), DataError);
  }
}

TEST_CASE("RFC 3339 format and parse round trip") {
  auto t = ParseRfc3339("1999-12-31T23:59:59Z");
  for (int i = 0; i < 200; ++i) {
    t += std::chrono::milliseconds(86'400'000LL * 37 + 1234 * i);
    CHECK(ParseRfc3339(FormatRfc3339(t)) == t);
  }
}

TEST_CASE("string helpers") {
  CHECK(Trim("  a b \n") == "a b");
  CHECK(Trim("") == "");
  CHECK(ToLower("VeRdIcT") == "verdict");
  CHECK(ToUpper("tie") == "TIE");
  CHECK(StartsWithIgnoreCase("Verdict: A", "VERDICT:"));
  CHECK_FALSE(StartsWithIgnoreCase("VERD", "VERDICT:"));
  CHECK(ContainsIgnoreCase("Keeps returning to: Jazz", "jazz"));
  CHECK_FALSE(ContainsIgnoreCase("Keeps returning to: Jazz", "chess"));
  CHECK(Join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(Join({}, ", ") == "");
}

TEST_CASE("UTF-8 aware truncation") {
  CHECK(Utf8Length("héllo") == 5);
  CHECK(TruncateWithEllipsis("short", 10) == "short");
  CHECK(TruncateWithEllipsis("abcdefghij", 10) == "abcdefghij");
  CHECK(TruncateWithEllipsis("abcdefghijk", 10) == "abcdefg...");
  // Never splits a multi-byte sequence.
  const auto cut = TruncateWithEllipsis("ééééééééééé", 6);
  CHECK(cut == "ééé...");
  CHECK(Utf8Length(cut) == 6);
}

TEST_CASE("hash primitives against published vectors") {
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a64("foobar") == 0x85944171f73967e8ULL);
  // First output of the reference splitmix64 generator seeded with 0.
  CHECK(SplitMix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(Sha256Hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256Hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("atomic file writes") {
  testing::TempDir dir;
  const auto path = dir / "sub/out.txt";
  WriteFileAtomic(path, "first");
  WriteFileAtomic(path, "second");
  CHECK(ReadFile(path) == "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(path.parent_path())) {
    ++entries;
  }
  CHECK(entries == 1);
  CHECK_THROWS_AS(ReadFile(dir / "missing"), DataError);
}

}  // namespace
}  // namespace podjudge
