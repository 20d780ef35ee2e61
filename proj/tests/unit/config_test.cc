// Copyright 2026 The sparsecomm Authors. All Rights Reserved.
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
// =============================================================================

#include "sparsecomm/config.h"

#include <gtest/gtest.h>

#include <filesystem>

namespace sparsecomm {
namespace {

std::string ErrorOf(const std::string& text) {
  try {
    parse_config(text, "cfg.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, MinimalConfigUsesDefaults) {
  const auto cfg = parse_config("[compressor]\nkind = topk\n");
  EXPECT_EQ(cfg.compressor.kind, CompressorKind::kTopK);
  EXPECT_EQ(cfg.compressor.fraction, 0.01);
  EXPECT_EQ(cfg.scheme, CommScheme::kAllGather);
  EXPECT_EQ(cfg.trainer.momentum, 0.9);
  EXPECT_EQ(cfg.trainer.weight_decay, 1e-4);
  EXPECT_EQ(cfg.trainer.gamma0, 0.1);
  EXPECT_EQ(cfg.workers, 1u);
  EXPECT_EQ(cfg.cluster.world_size, 1u);
}

TEST(ConfigTest, SchemeAndStepSizeDefaultsFollowTheCompressor) {
  const auto dense = parse_config("[compressor]\nkind = identity\n");
  EXPECT_EQ(dense.scheme, CommScheme::kAllReduce);
  const auto global = parse_config("[compressor]\nkind = randomk\nscope = global\n");
  EXPECT_EQ(global.trainer.gamma0, 0.01);
  const auto explicit_gamma =
      parse_config("[compressor]\nkind = topk\nscope = global\n[trainer]\ngamma0 = 0.2\n");
  EXPECT_EQ(explicit_gamma.trainer.gamma0, 0.2);
}

TEST(ConfigTest, IncompatibleSchemeNamesTheRule) {
  const auto err = ErrorOf("[run]\nscheme = allreduce\n[compressor]\nkind = topk\n");
  EXPECT_NE(err.find("topk-requires-allgather"), std::string::npos) << err;
  EXPECT_NE(ErrorOf("[run]\nscheme = allreduce\n[compressor]\nkind = randomk\n"
                    "seed_mode = perworker\n")
                .find("allreduce-requires-shared-seed"),
            std::string::npos);
}

TEST(ConfigTest, ErrorsNameTheOffender) {
  EXPECT_NE(ErrorOf("[bogus]\nx = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(ErrorOf("[trainer]\nlearning_rate = 1\n").find("learning_rate"), std::string::npos);
  EXPECT_NE(ErrorOf("[compressor]\nfraction = lots\n").find("compressor.fraction"),
            std::string::npos);
  EXPECT_NE(ErrorOf("[compressor]\nfraction = 1.5\n"), "");
  EXPECT_NE(ErrorOf("[compressor]\nkind = sketch\n").find("sketch"), std::string::npos);
  EXPECT_NE(ErrorOf("[run]\nworkers = 0\n"), "");
}

TEST(ConfigTest, InlineCommentsAreIgnored) {
  const auto cfg = parse_config(
      "[compressor]\nkind = randomk   ; identity | topk\nscope = global # or layerwise\n");
  EXPECT_EQ(cfg.compressor.kind, CompressorKind::kRandomK);
  EXPECT_EQ(cfg.compressor.scope, SparsifyScope::kGlobal);
}

TEST(ConfigTest, SyntaxErrorsCarryTheLine) {
  const auto err = ErrorOf("[run]\nname = a\nthis line has no equals sign\n");
  EXPECT_NE(err.find("cfg.ini:3"), std::string::npos) << err;
}

TEST(ConfigTest, RoundTripsThroughText) {
  RunConfig cfg;
  cfg.name = "rt";
  cfg.workers = 4;
  cfg.cluster.world_size = 4;
  cfg.compressor.kind = CompressorKind::kBlockRandomK;
  cfg.compressor.fraction = 0.037;
  cfg.compressor.scope = SparsifyScope::kGlobal;
  cfg.scheme = CommScheme::kAllReduce;
  cfg.trainer.gamma0 = 0.0123456789;
  cfg.trainer.epochs = 7;
  cfg.trainer.lr_decay_epochs = {3, 5};
  cfg.model.hidden = {5};
  cfg.model.activation = Activation::kRelu;
  cfg.data.condition = 123.5;
  cfg.data.partition = DataPartition::kReplicate;
  cfg.cluster.latency = 2.5e-6;
  EXPECT_EQ(parse_config(config_to_string(cfg)), cfg);

  const auto dir = std::filesystem::temp_directory_path() / "sparsecomm_config_test";
  std::filesystem::create_directories(dir);
  save_config(cfg, dir / "c.ini");
  EXPECT_EQ(load_config(dir / "c.ini"), cfg);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_config(dir / "missing.ini"), IoError);
}

TEST(GridTest, CartesianProductWithPerPointValidation) {
  const auto grid = expand_grid(
      "[run]\nname = g\noutput_dir = out\n"
      "[grid]\ncompressor.kind = topk, identity\nrun.workers = 1, 2, 4\n");
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_EQ(grid[0].name, "g_kind-topk_workers-1");
  EXPECT_EQ(grid[5].name, "g_kind-identity_workers-4");
  for (const auto& e : grid) {
    ASSERT_TRUE(e.valid) << e.error;
    EXPECT_EQ(e.config.output_dir, (std::filesystem::path("out") / e.name).string());
    EXPECT_EQ(e.config.cluster.world_size, e.config.workers);
  }
  EXPECT_EQ(grid[4].config.scheme, CommScheme::kAllReduce);

  const auto mixed = expand_grid(
      "[run]\nscheme = allgather\n[grid]\ncompressor.kind = topk, identity\n");
  ASSERT_EQ(mixed.size(), 2u);
  EXPECT_TRUE(mixed[0].valid);
  EXPECT_FALSE(mixed[1].valid);
  EXPECT_NE(mixed[1].error.find("identity-requires-allreduce"), std::string::npos);

  EXPECT_THROW(expand_grid("[run]\nname = x\n"), ConfigError);
  EXPECT_THROW(expand_grid("[grid]\nnope.key = 1\n"), ConfigError);
}

}  // namespace
}  // namespace sparsecomm
