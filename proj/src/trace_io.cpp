#include "rangebal/trace_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace rangebal {

namespace {

using Json = nlohmann::ordered_json;

const char* kind_name(OpKind kind) {
  return kind == OpKind::insert ? "insert" : "delete";
}

const char* balance_name(BalanceKind kind) {
  switch (kind) {
    case BalanceKind::none: return "none";
    case BalanceKind::min_balance: return "min_balance";
    case BalanceKind::split_max: return "split_max";
    case BalanceKind::split_nbr: return "split_nbr";
  }
  return "none";
}

const char* direction_name(TransferDirection d) {
  switch (d) {
    case TransferDirection::none: return "none";
    case TransferDirection::left: return "left";
    case TransferDirection::right: return "right";
  }
  return "none";
}

void put_role(Json& roles, Json& loads, const char* name,
              const std::optional<RoleInfo>& role) {
  if (!role) return;
  roles[name] = role->id;
  loads[name] = Json::array({role->load_pre, role->load_post});
}

std::optional<RoleInfo> get_role(const Json& roles, const Json& loads,
                                 const char* name) {
  if (!roles.contains(name)) return std::nullopt;
  RoleInfo info;
  info.id = roles.at(name).get<NodeId>();
  const Json& pair = loads.at(name);
  info.load_pre = pair.at(0).get<std::uint64_t>();
  info.load_post = pair.at(1).get<std::uint64_t>();
  return info;
}

Rational rational_from(const Json& obj, const char* num_field,
                       const char* den_field) {
  const Integer num(obj.at(num_field).get<std::string>());
  const Integer den(obj.at(den_field).get<std::string>());
  if (den == 0) throw TraceParseError("zero denominator in trace");
  return Rational(num, den);
}

}  // namespace

std::string event_json_line(const EventRecord& rec) {
  Json obj;
  obj["seq"] = rec.seq;
  obj["kind"] = kind_name(rec.kind);
  obj["key"] = rec.key;
  Json roles = Json::object();
  Json loads = Json::object();
  put_role(roles, loads, "u", rec.balance.u);
  put_role(roles, loads, "v", rec.balance.v);
  put_role(roles, loads, "z", rec.balance.z);
  put_role(roles, loads, "w", rec.balance.w);
  obj["roles"] = std::move(roles);
  obj["loads"] = std::move(loads);
  obj["balance"] = balance_name(rec.balance.kind);
  obj["direction"] = direction_name(rec.balance.direction);
  obj["keys_moved"] = rec.keys_moved;
  obj["queries"] = rec.queries;
  obj["nbr_adjusts"] = rec.nbr_adjusts;
  obj["reorders"] = rec.reorders;
  obj["partition_changes"] = rec.partition_changes;
  obj["contacts"] = rec.contacts;
  obj["messages"] = rec.messages;
  obj["pre_min"] = rec.pre_min;
  obj["pre_max"] = rec.pre_max;
  obj["min"] = rec.post_min;
  obj["max"] = rec.post_max;
  obj["phase"] = rec.phase;
  obj["phi_num"] = numerator(rec.phi).str();
  obj["phi_den"] = denominator(rec.phi).str();
  obj["phi_mid_num"] = numerator(rec.phi_mid).str();
  obj["phi_mid_den"] = denominator(rec.phi_mid).str();
  return obj.dump();
}

EventRecord event_from_json_line(const std::string& line, std::size_t line_no) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error& err) {
    throw TraceParseError("line " + std::to_string(line_no) + ": " + err.what());
  }
  try {
    EventRecord rec;
    rec.seq = obj.at("seq").get<std::uint64_t>();
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "insert")
      rec.kind = OpKind::insert;
    else if (kind == "delete")
      rec.kind = OpKind::erase;
    else
      throw TraceParseError("line " + std::to_string(line_no) +
                            ": unknown kind '" + kind + "'");
    rec.key = obj.at("key").get<Key>();

    const Json& roles = obj.at("roles");
    const Json& loads = obj.at("loads");
    rec.balance.u = get_role(roles, loads, "u");
    rec.balance.v = get_role(roles, loads, "v");
    rec.balance.z = get_role(roles, loads, "z");
    rec.balance.w = get_role(roles, loads, "w");

    const std::string balance = obj.at("balance").get<std::string>();
    if (balance == "none")
      rec.balance.kind = BalanceKind::none;
    else if (balance == "min_balance")
      rec.balance.kind = BalanceKind::min_balance;
    else if (balance == "split_max")
      rec.balance.kind = BalanceKind::split_max;
    else if (balance == "split_nbr")
      rec.balance.kind = BalanceKind::split_nbr;
    else
      throw TraceParseError("line " + std::to_string(line_no) +
                            ": unknown balance kind '" + balance + "'");

    const std::string direction = obj.at("direction").get<std::string>();
    if (direction == "none")
      rec.balance.direction = TransferDirection::none;
    else if (direction == "left")
      rec.balance.direction = TransferDirection::left;
    else if (direction == "right")
      rec.balance.direction = TransferDirection::right;
    else
      throw TraceParseError("line " + std::to_string(line_no) +
                            ": unknown direction '" + direction + "'");

    rec.keys_moved = obj.at("keys_moved").get<std::uint64_t>();
    rec.balance.keys_moved = rec.keys_moved;
    rec.queries = obj.at("queries").get<std::uint32_t>();
    rec.nbr_adjusts = obj.at("nbr_adjusts").get<std::uint32_t>();
    rec.reorders = obj.at("reorders").get<std::uint32_t>();
    rec.partition_changes = obj.at("partition_changes").get<std::uint32_t>();
    rec.contacts = obj.at("contacts").get<std::uint32_t>();
    rec.messages = obj.at("messages").get<std::uint64_t>();
    rec.pre_min = obj.at("pre_min").get<std::uint64_t>();
    rec.pre_max = obj.at("pre_max").get<std::uint64_t>();
    rec.post_min = obj.at("min").get<std::uint64_t>();
    rec.post_max = obj.at("max").get<std::uint64_t>();
    rec.phase = obj.at("phase").get<std::uint64_t>();
    rec.phi = rational_from(obj, "phi_num", "phi_den");
    rec.phi_mid = rational_from(obj, "phi_mid_num", "phi_mid_den");
    return rec;
  } catch (const Json::exception& err) {
    throw TraceParseError("line " + std::to_string(line_no) + ": " + err.what());
  }
}

void write_trace(std::ostream& out, const std::vector<EventRecord>& trace) {
  for (const EventRecord& rec : trace) out << event_json_line(rec) << '\n';
}

std::vector<EventRecord> read_trace(std::istream& in) {
  std::vector<EventRecord> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    trace.push_back(event_from_json_line(line, line_no));
  }
  return trace;
}

}  // namespace rangebal
