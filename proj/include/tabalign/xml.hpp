#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabalign {

// Minimal strict XML subset: declaration, comments, elements with quoted
// attributes, character data with the five predefined entities, CDATA.
// Enough for competition-format annotation files; throws
// Error(MalformedXml) on anything structurally wrong.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  std::string text;  // concatenated character data of this element

  std::optional<std::string> attribute(std::string_view key) const;
  std::vector<const XmlNode*> children_named(std::string_view name) const;
  const XmlNode* first_child(std::string_view name) const;
};

XmlNode parse_xml(std::string_view input);

}  // namespace tabalign
