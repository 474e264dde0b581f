#include "phytoken/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::size_t line = 0;
  std::size_t column = 0;
  bool has_text = false;
};

class DomBuilder {
 public:
  static XmlElement build(std::string_view text) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) {
      throw Error("cannot allocate XML parser");
    }
    DomBuilder builder(parser.get());
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &DomBuilder::on_text);

    const auto status = XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), 1);
    if (status != XML_STATUS_OK) {
      throw XmlParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                          XML_GetCurrentLineNumber(parser.get()),
                          XML_GetCurrentColumnNumber(parser.get()) + 1);
    }
    if (!builder.root_) {
      throw XmlParseError("no root element", 1, 1);
    }
    return std::move(*builder.root_);
  }

 private:
  explicit DomBuilder(XML_Parser parser) : parser_(parser) {}

  static void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<DomBuilder*>(user);
    XmlElement element;
    element.name = name;
    element.line = XML_GetCurrentLineNumber(self->parser_);
    element.column = XML_GetCurrentColumnNumber(self->parser_) + 1;
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
      element.attributes.emplace_back(attrs[i], attrs[i + 1]);
    }
    self->open_.push_back(std::move(element));
  }

  static void on_end(void* user, const XML_Char* /*name*/) {
    auto* self = static_cast<DomBuilder*>(user);
    XmlElement done = std::move(self->open_.back());
    self->open_.pop_back();
    if (self->open_.empty()) {
      self->root_ = std::move(done);
    } else {
      self->open_.back().children.push_back(std::move(done));
    }
  }

  static void on_text(void* user, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(user);
    if (self->open_.empty()) {
      return;
    }
    const std::string_view chunk(s, static_cast<std::size_t>(len));
    const bool blank = std::all_of(chunk.begin(), chunk.end(), [](char c) {
      return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    });
    if (!blank) {
      self->open_.back().has_text = true;
    }
  }

  XML_Parser parser_;
  std::vector<XmlElement> open_;
  std::optional<XmlElement> root_;
};

// Attribute access with schema checks: every attribute must be consumed
// exactly once, unknown attributes are rejected by finish().
class Attributes {
 public:
  Attributes(const XmlElement& element, std::string path)
      : element_(element), path_(std::move(path)), used_(element.attributes.size(), false) {
    if (element.has_text) {
      fail("unexpected character data in <" + element.name + ">");
    }
  }

  double real(std::string_view key) {
    const std::string& text = raw(key);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      fail("attribute '" + std::string(key) + "' is not a finite decimal number: '" + text + "'");
    }
    return value;
  }

  int integer(std::string_view key) {
    const std::string& text = raw(key);
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      fail("attribute '" + std::string(key) + "' is not an integer: '" + text + "'");
    }
    return value;
  }

  void finish() const {
    for (std::size_t i = 0; i < used_.size(); ++i) {
      if (!used_[i]) {
        fail("unknown attribute '" + element_.attributes[i].first + "'");
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError(path_, message + " (line " + std::to_string(element_.line) + ")");
  }

 private:
  const std::string& raw(std::string_view key) {
    for (std::size_t i = 0; i < element_.attributes.size(); ++i) {
      if (element_.attributes[i].first == key) {
        used_[i] = true;
        return element_.attributes[i].second;
      }
    }
    fail("missing attribute '" + std::string(key) + "'");
  }

  const XmlElement& element_;
  std::string path_;
  std::vector<bool> used_;
};

[[noreturn]] void unknown_element(const XmlElement& element, const std::string& path) {
  throw ValidationError(path + "/" + element.name,
                        "unexpected element <" + element.name + "> (line " +
                            std::to_string(element.line) + ")");
}

Leaf read_leaf(const XmlElement& e, const std::string& path) {
  Attributes a(e, path);
  Leaf leaf;
  const int pos = a.integer("pos");
  if (pos < 3 || pos > 5) {
    a.fail("pos must be 3, 4 or 5");
  }
  leaf.position = static_cast<LeafPosition>(pos);
  leaf.scale = a.real("scale");
  leaf.pitch = a.real("pitch");
  leaf.yaw = a.real("yaw");
  leaf.roll = a.real("roll");
  a.finish();
  if (!e.children.empty()) {
    unknown_element(e.children.front(), path);
  }
  return leaf;
}

Petiole read_petiole(const XmlElement& e, const std::string& path) {
  Attributes a(e, path);
  Petiole petiole;
  petiole.length = a.real("length");
  petiole.radius = a.real("radius");
  petiole.pitch = a.real("pitch");
  petiole.curvature = a.real("curvature");
  petiole.leaflet_scale = a.real("leaflet_scale");
  a.finish();
  for (const auto& child : e.children) {
    if (child.name != "leaf") {
      unknown_element(child, path);
    }
    petiole.leaves.push_back(
        read_leaf(child, path + "/leaf[" + std::to_string(petiole.leaves.size()) + "]"));
  }
  return petiole;
}

Internode read_internode(const XmlElement& e, const std::string& path) {
  Attributes a(e, path);
  Internode internode;
  internode.length = a.real("length");
  internode.radius = a.real("radius");
  internode.pitch = a.real("pitch");
  internode.phyllotactic_angle = a.real("phyllotactic");
  a.finish();
  if (!e.children.empty()) {
    unknown_element(e.children.front(), path);
  }
  return internode;
}

Shoot read_shoot(const XmlElement& e, const std::string& parent_path);

Phytomer read_phytomer(const XmlElement& e, const std::string& path) {
  Attributes a(e, path);
  a.finish();
  Phytomer phytomer;
  bool have_internode = false;
  for (const auto& child : e.children) {
    if (child.name == "internode") {
      if (have_internode) {
        throw ValidationError(path + "/internode", "duplicate <internode> (line " +
                                                       std::to_string(child.line) + ")");
      }
      phytomer.internode = read_internode(child, path + "/internode");
      have_internode = true;
    } else if (child.name == "petiole") {
      phytomer.petioles.push_back(read_petiole(
          child, path + "/petiole[" + std::to_string(phytomer.petioles.size()) + "]"));
    } else if (child.name == "shoot") {
      phytomer.child_shoots.push_back(read_shoot(child, path));
    } else {
      unknown_element(child, path);
    }
  }
  if (!have_internode) {
    a.fail("phytomer has no <internode>");
  }
  return phytomer;
}

Shoot read_shoot(const XmlElement& e, const std::string& parent_path) {
  Shoot shoot;
  shoot.id = Attributes(e, parent_path + "/shoot").integer("id");
  const std::string path = parent_path + "/shoot[id=" + std::to_string(shoot.id) + "]";
  Attributes attrs(e, path);
  attrs.integer("id");
  shoot.order = attrs.integer("order");
  if (shoot.order < 0 || shoot.order > kMaxBranchingOrder) {
    attrs.fail("branching order " + std::to_string(shoot.order) + " outside [0, 3]");
  }
  shoot.parent_node_index = attrs.integer("parent_node");
  const int type = attrs.integer("type");
  if (type != static_cast<int>(ShootType::unifoliate) &&
      type != static_cast<int>(ShootType::trifoliate)) {
    attrs.fail("type must be 1 (unifoliate) or 3 (trifoliate)");
  }
  shoot.type = static_cast<ShootType>(type);
  shoot.base_pitch = attrs.real("pitch");
  shoot.base_yaw = attrs.real("yaw");
  shoot.base_roll = attrs.real("roll");
  attrs.finish();
  for (const auto& child : e.children) {
    if (child.name != "phytomer") {
      unknown_element(child, path);
    }
    shoot.phytomers.push_back(
        read_phytomer(child, path + "/phytomer[" + std::to_string(shoot.phytomers.size()) + "]"));
  }
  return shoot;
}

void append_attr(std::string& out, const char* key, double value) {
  out += ' ';
  out += key;
  out += "=\"";
  out += format_decimal(value);
  out += '"';
}

void append_attr(std::string& out, const char* key, int value) {
  out += ' ';
  out += key;
  out += "=\"";
  out += std::to_string(value);
  out += '"';
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

void write_petiole(std::string& out, const Petiole& p, int depth) {
  indent(out, depth);
  out += "<petiole";
  append_attr(out, "length", p.length);
  append_attr(out, "radius", p.radius);
  append_attr(out, "pitch", p.pitch);
  append_attr(out, "curvature", p.curvature);
  append_attr(out, "leaflet_scale", p.leaflet_scale);
  out += ">\n";
  for (const auto& leaf : p.leaves) {
    indent(out, depth + 1);
    out += "<leaf";
    append_attr(out, "pos", static_cast<int>(leaf.position));
    append_attr(out, "scale", leaf.scale);
    append_attr(out, "pitch", leaf.pitch);
    append_attr(out, "yaw", leaf.yaw);
    append_attr(out, "roll", leaf.roll);
    out += "/>\n";
  }
  indent(out, depth);
  out += "</petiole>\n";
}

void write_shoot(std::string& out, const Shoot& s, int depth) {
  indent(out, depth);
  out += "<shoot";
  append_attr(out, "id", s.id);
  append_attr(out, "order", s.order);
  append_attr(out, "parent_node", s.parent_node_index);
  append_attr(out, "type", static_cast<int>(s.type));
  append_attr(out, "pitch", s.base_pitch);
  append_attr(out, "yaw", s.base_yaw);
  append_attr(out, "roll", s.base_roll);
  if (s.phytomers.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& p : s.phytomers) {
    indent(out, depth + 1);
    out += "<phytomer>\n";
    indent(out, depth + 2);
    out += "<internode";
    append_attr(out, "length", p.internode.length);
    append_attr(out, "radius", p.internode.radius);
    append_attr(out, "pitch", p.internode.pitch);
    append_attr(out, "phyllotactic", p.internode.phyllotactic_angle);
    out += "/>\n";
    for (std::size_t j = 0; j < p.petioles.size(); ++j) {
      write_petiole(out, p.petioles[j], depth + 2);
      if (j == 0) {
        for (const auto& child : p.child_shoots) {
          write_shoot(out, child, depth + 2);
        }
      }
    }
    indent(out, depth + 1);
    out += "</phytomer>\n";
  }
  indent(out, depth);
  out += "</shoot>\n";
}

}  // namespace

std::string format_decimal(double value) {
  if (value == 0.0) {
    return std::signbit(value) ? "-0.0" : "0.0";
  }
  char buf[128];
  const double mag = std::abs(value);
  const auto [ptr, ec] = mag >= 1e-6 && mag < 1e16
                             ? std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed)
                             : std::to_chars(buf, buf + sizeof(buf), value);
  std::string text(buf, ptr);
  if (text.find_first_of(".en") == std::string::npos) {
    text += ".0";
  }
  return text;
}

PlantDoc parse_xml(std::string_view text) {
  const XmlElement root = DomBuilder::build(text);
  if (root.name != "plant") {
    throw ValidationError(root.name, "root element must be <plant> (line " +
                                         std::to_string(root.line) + ")");
  }
  PlantDoc doc;
  Attributes a(root, "plant");
  doc.plant_age = a.integer("age");
  doc.base_position = {a.real("base_x"), a.real("base_y"), a.real("base_z")};
  a.finish();
  if (root.children.size() != 1 || root.children.front().name != "shoot") {
    if (!root.children.empty() && root.children.front().name != "shoot") {
      unknown_element(root.children.front(), "plant");
    }
    a.fail("plant must contain exactly one root <shoot>");
  }
  doc.root_shoot = read_shoot(root.children.front(), "plant");
  validate(doc);
  return doc;
}

std::string serialize_xml(const PlantDoc& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<plant";
  append_attr(out, "age", doc.plant_age);
  append_attr(out, "base_x", doc.base_position[0]);
  append_attr(out, "base_y", doc.base_position[1]);
  append_attr(out, "base_z", doc.base_position[2]);
  out += ">\n";
  write_shoot(out, doc.root_shoot, 1);
  out += "</plant>\n";
  return out;
}

}  // namespace phytoken
