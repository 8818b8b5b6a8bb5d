#include "nashstream/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_out(double x, NumberMode mode) {
  if (mode == NumberMode::decimal_string) return format_double(x);
  return x;
}

double number_in(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw ValidationError(std::string(what) + " must be a number or a decimal string");
}

}  // namespace

std::string instance_to_json(const Instance& inst, NumberMode mode) {
  ordered_json root;
  root["num_agents"] = inst.num_agents();
  ordered_json items = ordered_json::array();
  for (const Item& item : inst.items()) {
    ordered_json entry;
    entry["supply"] = number_out(item.supply, mode);
    ordered_json values = ordered_json::array();
    for (double v : item.values) values.push_back(number_out(v, mode));
    entry["values"] = std::move(values);
    items.push_back(std::move(entry));
  }
  root["items"] = std::move(items);
  return root.dump(2);
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("num_agents") || !root.contains("items"))
    throw ValidationError("instance must be an object with num_agents and items");
  if (!root["num_agents"].is_number_unsigned())
    throw ValidationError("num_agents must be a nonnegative integer");
  std::size_t num_agents = root["num_agents"].get<std::size_t>();
  if (!root["items"].is_array())
    throw ValidationError("items must be an array");

  std::vector<Item> items;
  items.reserve(root["items"].size());
  for (const auto& entry : root["items"]) {
    if (!entry.is_object() || !entry.contains("supply") || !entry.contains("values"))
      throw ValidationError("each item must be an object with supply and values");
    Item item;
    item.supply = number_in(entry["supply"], "supply");
    if (!entry["values"].is_array())
      throw ValidationError("values must be an array");
    item.values.reserve(entry["values"].size());
    for (const auto& v : entry["values"])
      item.values.push_back(number_in(v, "value"));
    items.push_back(std::move(item));
  }
  return Instance(num_agents, std::move(items));
}

void write_instance(const std::filesystem::path& path, const Instance& inst,
                    NumberMode mode) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << instance_to_json(inst, mode) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

std::string allocation_to_csv(const Allocation& alloc) {
  std::ostringstream out;
  out << "agent";
  for (std::size_t t = 0; t < alloc.num_items(); ++t) out << ",item_" << (t + 1);
  out << '\n';
  for (std::size_t i = 0; i < alloc.num_agents(); ++i) {
    out << i;
    for (std::size_t t = 0; t < alloc.num_items(); ++t)
      out << ',' << format_double(alloc.at(i, t));
    out << '\n';
  }
  return out.str();
}

void write_allocation(const std::filesystem::path& path, const Allocation& alloc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << allocation_to_csv(alloc);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace nashstream
