#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "nashstream/errors.hpp"
#include "nashstream/generators.hpp"
#include "nashstream/instance.hpp"
#include "nashstream/instance_io.hpp"
#include "nashstream/numeric.hpp"

using namespace nashstream;

namespace {

bool same_bits(const Instance& a, const Instance& b) {
  if (a.num_agents() != b.num_agents() || a.num_items() != b.num_items())
    return false;
  for (std::size_t t = 0; t < a.num_items(); ++t) {
    if (a.item(t).supply != b.item(t).supply) return false;
    if (a.item(t).values != b.item(t).values) return false;
  }
  return true;
}

Instance awkward_instance(std::uint64_t seed) {
  // Values spanning the exponent range, including numbers with no short
  // decimal form, to stress shortest-round-trip formatting.
  std::mt19937_64 rng(seed);
  std::vector<Item> items;
  for (int t = 0; t < 6; ++t) {
    Item it;
    it.supply = std::ldexp(1.0 + unit_from_bits(rng()),
                           static_cast<int>(rng() % 40) - 20);
    for (int i = 0; i < 4; ++i)
      it.values.push_back(
          (rng() % 5 == 0)
              ? 0.0
              : std::ldexp(1.0 + unit_from_bits(rng()),
                           static_cast<int>(rng() % 200) - 100));
    items.push_back(std::move(it));
  }
  return Instance(4, std::move(items));
}

}  // namespace

TEST_CASE("instance json round-trips bit-exactly in both modes") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Instance inst = awkward_instance(seed);
    Instance n = instance_from_json(instance_to_json(inst, NumberMode::json_number));
    CHECK(same_bits(inst, n));
    Instance s =
        instance_from_json(instance_to_json(inst, NumberMode::decimal_string));
    CHECK(same_bits(inst, s));
  }
}

TEST_CASE("decimal-string mode quotes numbers") {
  Instance inst(1, {Item{0.5, {1.5}}});
  std::string text = instance_to_json(inst, NumberMode::decimal_string);
  CHECK(text.find("\"0.5\"") != std::string::npos);
  CHECK(text.find("\"1.5\"") != std::string::npos);
  std::string plain = instance_to_json(inst, NumberMode::json_number);
  CHECK(plain.find("\"0.5\"") == std::string::npos);
}

TEST_CASE("reader accepts mixed number encodings") {
  Instance inst = instance_from_json(R"({
    "num_agents": 2,
    "items": [
      {"supply": "2.5", "values": [1.0, "0.125"]},
      {"supply": 1e2, "values": ["3e-2", 0.0]}
    ]
  })");
  CHECK(inst.item(0).supply == 2.5);
  CHECK(inst.item(0).values[1] == 0.125);
  CHECK(inst.item(1).supply == 100.0);
  CHECK(inst.item(1).values[0] == 0.03);
}

TEST_CASE("reader rejects malformed documents") {
  CHECK_THROWS_AS(instance_from_json("not json"), ValidationError);
  CHECK_THROWS_AS(instance_from_json("[]"), ValidationError);
  CHECK_THROWS_AS(instance_from_json(R"({"items": []})"), ValidationError);
  CHECK_THROWS_AS(instance_from_json(R"({"num_agents": 2})"), ValidationError);
  CHECK_THROWS_AS(instance_from_json(R"({"num_agents": -2, "items": []})"),
                  ValidationError);
  CHECK_THROWS_AS(
      instance_from_json(R"({"num_agents": 1, "items": [{"supply": 1}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      instance_from_json(
          R"({"num_agents": 1, "items": [{"supply": 1, "values": ["x"]}]})"),
      ValidationError);
  // Structurally fine but semantically invalid: negative value.
  CHECK_THROWS_AS(
      instance_from_json(
          R"({"num_agents": 1, "items": [{"supply": 1, "values": [-1]}]})"),
      ValidationError);
}

TEST_CASE("file round-trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "nashstream_io_test";
  fs::create_directories(dir);
  Instance inst = awkward_instance(9);
  for (NumberMode mode : {NumberMode::json_number, NumberMode::decimal_string}) {
    fs::path p = dir / (mode == NumberMode::json_number ? "n.json" : "s.json");
    write_instance(p, inst, mode);
    CHECK(same_bits(inst, read_instance(p)));
  }
  CHECK_THROWS_AS(read_instance(dir / "missing.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("allocation csv layout") {
  Allocation a(2, 3);
  a.set_item(0, {0.5, 0.5});
  a.set_item(1, {1.0, 0.0});
  a.set_item(2, {0.25, 1.75});
  CHECK(allocation_to_csv(a) ==
        "agent,item_1,item_2,item_3\n"
        "0,0.5,1,0.25\n"
        "1,0.5,0,1.75\n");
}
