#include "fsfm/model_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"

using namespace fsfm;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("checkpoint: residual model round trip is bit-exact") {
  const auto model = Mlp<double>::glorot({2, 20, 20, 20, 2}, 2024);
  const std::string p1 = temp_path("fsfm_ck1.bin"), p2 = temp_path("fsfm_ck2.bin");
  save_checkpoint(p1, model);
  CHECK(checkpoint_kind(p1) == kCheckpointKindOde);
  const Mlp<double> loaded = load_ode_checkpoint(p1);
  CHECK(loaded.layer_sizes == model.layer_sizes);
  CHECK(testing::params_identical(loaded, model));
  save_checkpoint(p2, loaded);
  CHECK(slurp(p1) == slurp(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("checkpoint: pde model round trip keeps weights and metadata") {
  const auto model = PdeFlowMap<double>::glorot(20, 3, 8, 4, 7);
  PdeModelMeta meta;
  meta.components = 2;
  meta.grid = "periodic1d n=10 x=[0,5]";
  const std::string p1 = temp_path("fsfm_pck1.bin"), p2 = temp_path("fsfm_pck2.bin");
  save_checkpoint(p1, model, meta);
  CHECK(checkpoint_kind(p1) == kCheckpointKindPde);
  PdeModelMeta loaded_meta;
  const PdeFlowMap<double> loaded = load_pde_checkpoint(p1, &loaded_meta);
  CHECK(loaded_meta.components == 2);
  CHECK(loaded_meta.grid == meta.grid);
  CHECK(loaded.num_channels() == 3);
  CHECK(testing::params_identical(loaded, model));
  save_checkpoint(p2, loaded, loaded_meta);
  CHECK(slurp(p1) == slurp(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("checkpoint: framing and kind errors") {
  const auto model = Mlp<double>::glorot({2, 6, 2}, 1);
  const std::string path = temp_path("fsfm_ck_bad.bin");
  save_checkpoint(path, model);
  const std::string bytes = slurp(path);

  SUBCASE("truncation is rejected") {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    os.close();
    CHECK_THROWS_AS(load_ode_checkpoint(path), IoError);
  }
  SUBCASE("trailing bytes are rejected") {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os << "!";
    os.close();
    CHECK_THROWS_AS(load_ode_checkpoint(path), IoError);
  }
  SUBCASE("kind mismatch is rejected") {
    CHECK_THROWS_AS(load_pde_checkpoint(path), IoError);
  }
  SUBCASE("bad magic is rejected") {
    std::string corrupt = bytes;
    corrupt[4] = '9';
    std::ofstream os(path, std::ios::binary);
    os.write(corrupt.data(), static_cast<std::streamsize>(corrupt.size()));
    os.close();
    CHECK_THROWS_AS(checkpoint_kind(path), IoError);
  }
  std::remove(path.c_str());
}
