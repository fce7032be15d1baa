// Copyright 2026 The lcrec Authors.
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

#include "lcrec/config.h"

#include <gtest/gtest.h>

#include <fstream>

#include "lcrec/cli/run_config.h"
#include "lcrec/errors.h"
#include "test_support.h"

namespace lcrec {
namespace {

TEST(KeyValueTextTest, ParsesCommentsAndWhitespace) {
  const KeyValues kv = ParseKeyValueText(
      "# header\n\n  a = 1  \nb=two words # trailing\r\n\tc =\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1].second, "two words");
  EXPECT_EQ(kv[2].second, "");
  EXPECT_THROW(ParseKeyValueText("novalue\n"), UsageError);
}

TEST(KeyValueTextTest, FormatRoundTrips) {
  const KeyValues kv = {{"x.y", "3"}, {"z", "a,b"}};
  EXPECT_EQ(ParseKeyValueText(FormatKeyValues(kv)), kv);
}

TEST(ConfigBinderTest, TypedBindingAndEcho) {
  int i = 0;
  double d = 0;
  std::uint64_t u = 0;
  std::string s;
  bool b = false;
  ConfigBinder binder;
  binder.Bind("i", &i);
  binder.Bind("d", &d);
  binder.Bind("u", &u);
  binder.Bind("s", &s);
  binder.Bind("b", &b);
  binder.Apply({{"i", "-4"}, {"d", "0.1"}, {"u", "18446744073709551615"},
                {"s", "text"}, {"b", "true"}});
  EXPECT_EQ(i, -4);
  EXPECT_EQ(d, 0.1);
  EXPECT_EQ(u, 18446744073709551615ull);
  EXPECT_EQ(s, "text");
  EXPECT_TRUE(b);
  const KeyValues dump = binder.Dump();
  ASSERT_EQ(dump.size(), 5u);
  // Doubles echo with enough digits to reproduce the value exactly.
  EXPECT_EQ(std::stod(dump[1].second), 0.1);
  EXPECT_TRUE(binder.Has("s"));
  EXPECT_FALSE(binder.Has("t"));
}

TEST(ConfigBinderTest, RejectsUnknownKeysAndBadValues) {
  int i = 0;
  bool b = false;
  ConfigBinder binder;
  binder.Bind("i", &i);
  binder.Bind("b", &b);
  EXPECT_THROW(binder.Set("j", "1"), UsageError);
  EXPECT_THROW(binder.Set("i", "1.5"), UsageError);
  EXPECT_THROW(binder.Set("i", "x"), UsageError);
  EXPECT_THROW(binder.Set("b", "yes"), UsageError);
}

TEST(RunConfigTest, FileThenOverridesAndEcho) {
  lcrec::testing::TempDir dir("config");
  const auto path = dir / "run.cfg";
  std::ofstream(path) << "train.epochs = 4\nmodel.variant = ilem\n";
  cli::RunConfig config;
  cli::LoadRunConfig(config, &path, {{"train.epochs", "7"}});
  EXPECT_EQ(config.train.epochs, 7);
  EXPECT_EQ(config.model.variant, Variant::kIlem);

  // The echoed text alone reproduces the configuration.
  const std::string text = cli::EffectiveConfigText(config, "train");
  std::ofstream(dir / "echo.cfg") << text;
  cli::RunConfig again;
  const auto echo = dir / "echo.cfg";
  cli::LoadRunConfig(again, &echo, {});
  EXPECT_EQ(cli::EffectiveConfigText(again, "train"), text);

  cli::RunConfig bad;
  EXPECT_THROW(cli::LoadRunConfig(bad, nullptr, {{"train.nonsense", "1"}}),
               UsageError);
  const auto missing = dir / "missing.cfg";
  EXPECT_THROW(cli::LoadRunConfig(bad, &missing, {}), UsageError);
}

TEST(RunConfigTest, DefaultsMatchDocumentedSettings) {
  cli::RunConfig config;
  EXPECT_EQ(config.data.histogram_length, 20);
  EXPECT_EQ(config.data.max_results, 100);
  EXPECT_EQ(config.data.window_days, 20);
  EXPECT_EQ(config.model.vq.num_codes, 10);
  EXPECT_EQ(config.model.fusion.gamma, 2.0);
  EXPECT_EQ(config.model.recon_weight, 1.0);
  EXPECT_EQ(config.train.patience, 3);
  EXPECT_EQ(config.train.threads, 1);
}

}  // namespace
}  // namespace lcrec
