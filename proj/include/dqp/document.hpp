#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dqp {

using NodeId = std::uint32_t;

// Immutable in-memory XML tree. Node ids follow document order (preorder),
// so the descendants of n are exactly the ids in (n, subtree_end(n)).
// Names are kept as written (no namespace resolution). Text nodes that only
// hold whitespace are dropped; adjacent character data is merged.
class Document {
public:
    enum class Kind : std::uint8_t { Document, Element, Text };

    struct Attribute {
        std::string name;
        std::string value;
    };

    // Throws ParseError with the expat line and column.
    static Document parse(std::string_view xml);
    static Document parse_file(const std::filesystem::path& path);

    NodeId root() const { return 0; }  // the document node
    std::size_t node_count() const { return kind_.size(); }
    std::size_t element_count() const { return elements_; }
    int max_depth() const { return max_depth_; }

    Kind kind(NodeId n) const { return kind_[n]; }
    bool is_element(NodeId n) const { return kind_[n] == Kind::Element; }
    const std::string& name(NodeId n) const { return names_[name_[n]]; }
    NodeId parent(NodeId n) const { return parent_[n]; }
    NodeId subtree_end(NodeId n) const { return end_[n]; }

    // All children, text included, in document order.
    std::span<const NodeId> children(NodeId n) const {
        return {children_.data() + child_begin_[n], children_.data() + child_begin_[n + 1]};
    }
    std::span<const NodeId> element_children(NodeId n) const {
        return {element_children_.data() + element_begin_[n], element_children_.data() + element_begin_[n + 1]};
    }
    std::span<const Attribute> attributes(NodeId n) const {
        return {attrs_.data() + attr_begin_[n], attrs_.data() + attr_begin_[n + 1]};
    }
    const std::string* attribute(NodeId n, std::string_view name) const;

    // XPath string value: all descendant text in document order.
    std::string_view string_value(NodeId n) const {
        return std::string_view(text_).substr(text_begin_[n], text_end_[n] - text_begin_[n]);
    }

    // "/data/architect[1]": root element bare, then 1-based index among
    // same-name siblings.
    std::string path(NodeId n) const;

    // fn:deep-equal on two nodes of this document.
    bool deep_equal(NodeId a, NodeId b) const;

private:
    friend class DocumentBuilder;

    std::vector<Kind> kind_;
    std::vector<std::uint32_t> name_;
    std::vector<std::string> names_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> end_;
    std::vector<std::uint32_t> text_begin_, text_end_;
    std::string text_;
    std::vector<std::uint32_t> attr_begin_;
    std::vector<Attribute> attrs_;
    std::vector<std::uint32_t> child_begin_;
    std::vector<NodeId> children_;
    std::vector<std::uint32_t> element_begin_;
    std::vector<NodeId> element_children_;
    std::size_t elements_ = 0;
    int max_depth_ = 0;
};

}  // namespace dqp
