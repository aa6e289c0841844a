#include "tabalign/xml.hpp"

#include <cctype>

#include "tabalign/errors.hpp"

namespace tabalign {

std::optional<std::string> XmlNode::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<const XmlNode*> XmlNode::children_named(std::string_view name) const {
  std::vector<const XmlNode*> out;
  for (const XmlNode& c : children)
    if (c.name == name) out.push_back(&c);
  return out;
}

const XmlNode* XmlNode::first_child(std::string_view name) const {
  for (const XmlNode& c : children)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  XmlNode parse_document() {
    skip_prolog();
    XmlNode root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::MalformedXml, what + " at offset " + std::to_string(pos_));
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_comment() {
    pos_ += 4;  // "<!--"
    const std::size_t end = in_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  void skip_prolog() {
    skip_ws();
    if (starts_with("<?xml")) {
      const std::size_t end = in_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated declaration");
      pos_ = end + 2;
    }
    skip_misc();
    if (starts_with("<!DOCTYPE")) {
      const std::size_t end = in_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated doctype");
      pos_ = end + 1;
    }
    skip_misc();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--"))
        skip_comment();
      else
        break;
    }
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
          c == '.')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected name");
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      const std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const std::string_view name = raw.substr(i + 1, semi - i - 1);
      if (name == "amp")
        out.push_back('&');
      else if (name == "lt")
        out.push_back('<');
      else if (name == "gt")
        out.push_back('>');
      else if (name == "quot")
        out.push_back('"');
      else if (name == "apos")
        out.push_back('\'');
      else if (!name.empty() && name[0] == '#') {
        long code = 0;
        try {
          code = (name[1] == 'x' || name[1] == 'X') ? std::stol(std::string(name.substr(2)), nullptr, 16)
                                                    : std::stol(std::string(name.substr(1)));
        } catch (...) {
          fail("bad character reference");
        }
        // UTF-8 encode.
        if (code < 0x80) {
          out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
          out.push_back(static_cast<char>(0xC0 | (code >> 6)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code < 0x10000) {
          out.push_back(static_cast<char>(0xE0 | (code >> 12)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
          out.push_back(static_cast<char>(0xF0 | (code >> 18)));
          out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
      } else {
        fail("unknown entity '&" + std::string(name) + ";'");
      }
      i = semi;
    }
    return out;
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = peek();
    ++pos_;
    const std::size_t start = pos_;
    while (!eof() && peek() != quote) ++pos_;
    if (eof()) fail("unterminated attribute value");
    const std::string value = decode_entities(in_.substr(start, pos_ - start));
    ++pos_;
    return value;
  }

  XmlNode parse_element() {
    if (eof() || peek() != '<') fail("expected element");
    ++pos_;
    XmlNode node;
    node.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        return node;
      }
      std::string key = parse_name();
      skip_ws();
      if (eof() || peek() != '=') fail("expected '=' in attribute");
      ++pos_;
      skip_ws();
      node.attributes.emplace_back(std::move(key), parse_attribute_value());
    }
    // Content.
    for (;;) {
      if (eof()) fail("unterminated element '" + node.name + "'");
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("<![CDATA[")) {
        pos_ += 9;
        const std::size_t end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        node.text.append(in_.substr(pos_, end - pos_));
        pos_ = end + 3;
        continue;
      }
      if (starts_with("</")) {
        pos_ += 2;
        const std::string closing = parse_name();
        if (closing != node.name)
          fail("mismatched end tag '" + closing + "' for '" + node.name + "'");
        skip_ws();
        if (eof() || peek() != '>') fail("malformed end tag");
        ++pos_;
        return node;
      }
      if (peek() == '<') {
        node.children.push_back(parse_element());
        continue;
      }
      const std::size_t start = pos_;
      while (!eof() && peek() != '<') ++pos_;
      node.text.append(decode_entities(in_.substr(start, pos_ - start)));
    }
  }
};

}  // namespace

XmlNode parse_xml(std::string_view input) { return Parser(input).parse_document(); }

}  // namespace tabalign
