#include "dqp/document.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "dqp/errors.hpp"
#include "dqp/io.hpp"

namespace dqp {

class DocumentBuilder {
public:
    explicit DocumentBuilder(Document& d) : d_(d) {
        d_.names_.emplace_back();  // name id 0: no name
        add_node(Document::Kind::Document, 0, 0);
        open_.push_back(0);
    }

    void start(const char* name, const char** atts) {
        flush_text();
        NodeId parent = open_.back();
        NodeId n = add_node(Document::Kind::Element, parent, intern(name));
        d_.attr_begin_.back() = static_cast<std::uint32_t>(d_.attrs_.size());
        for (const char** a = atts; *a; a += 2) d_.attrs_.push_back({a[0], a[1]});
        ++d_.elements_;
        open_.push_back(n);
        d_.max_depth_ = std::max(d_.max_depth_, static_cast<int>(open_.size()) - 1);
    }

    void end() {
        flush_text();
        close(open_.back());
        open_.pop_back();
    }

    void chars(const char* s, int len) { pending_.append(s, static_cast<std::size_t>(len)); }

    void finish() {
        flush_text();
        close(0);
        std::size_t n = d_.kind_.size();
        d_.attr_begin_.push_back(static_cast<std::uint32_t>(d_.attrs_.size()));
        // per-parent child lists, flattened
        std::vector<std::uint32_t> count(n + 1, 0), ecount(n + 1, 0);
        for (NodeId i = 1; i < n; ++i) {
            ++count[d_.parent_[i]];
            if (d_.kind_[i] == Document::Kind::Element) ++ecount[d_.parent_[i]];
        }
        d_.child_begin_.assign(n + 1, 0);
        d_.element_begin_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            d_.child_begin_[i + 1] = d_.child_begin_[i] + count[i];
            d_.element_begin_[i + 1] = d_.element_begin_[i] + ecount[i];
        }
        d_.children_.resize(d_.child_begin_[n]);
        d_.element_children_.resize(d_.element_begin_[n]);
        std::vector<std::uint32_t> fill(d_.child_begin_.begin(), d_.child_begin_.end() - 1);
        std::vector<std::uint32_t> efill(d_.element_begin_.begin(), d_.element_begin_.end() - 1);
        for (NodeId i = 1; i < n; ++i) {
            NodeId p = d_.parent_[i];
            d_.children_[fill[p]++] = i;
            if (d_.kind_[i] == Document::Kind::Element) d_.element_children_[efill[p]++] = i;
        }
    }

private:
    NodeId add_node(Document::Kind k, NodeId parent, std::uint32_t name) {
        NodeId id = static_cast<NodeId>(d_.kind_.size());
        d_.kind_.push_back(k);
        d_.name_.push_back(name);
        d_.parent_.push_back(parent);
        d_.end_.push_back(id + 1);
        auto t = static_cast<std::uint32_t>(d_.text_.size());
        d_.text_begin_.push_back(t);
        d_.text_end_.push_back(t);
        d_.attr_begin_.push_back(static_cast<std::uint32_t>(d_.attrs_.size()));
        return id;
    }

    void close(NodeId n) {
        d_.end_[n] = static_cast<NodeId>(d_.kind_.size());
        d_.text_end_[n] = static_cast<std::uint32_t>(d_.text_.size());
    }

    void flush_text() {
        if (pending_.empty()) return;
        bool blank = std::all_of(pending_.begin(), pending_.end(),
                                 [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
        if (!blank) {
            NodeId n = add_node(Document::Kind::Text, open_.back(), 0);
            d_.text_ += pending_;
            d_.text_end_[n] = static_cast<std::uint32_t>(d_.text_.size());
        }
        pending_.clear();
    }

    std::uint32_t intern(const char* name) {
        auto [it, fresh] = ids_.try_emplace(name, static_cast<std::uint32_t>(d_.names_.size()));
        if (fresh) d_.names_.emplace_back(name);
        return it->second;
    }

    Document& d_;
    std::vector<NodeId> open_;
    std::string pending_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

namespace {

void XMLCALL on_start(void* u, const XML_Char* name, const XML_Char** atts) {
    static_cast<DocumentBuilder*>(u)->start(name, atts);
}
void XMLCALL on_end(void* u, const XML_Char*) { static_cast<DocumentBuilder*>(u)->end(); }
void XMLCALL on_chars(void* u, const XML_Char* s, int len) { static_cast<DocumentBuilder*>(u)->chars(s, len); }

}  // namespace

Document Document::parse(std::string_view xml) {
    Document d;
    DocumentBuilder b(d);
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> p(XML_ParserCreate(nullptr), XML_ParserFree);
    if (!p) throw std::runtime_error("cannot create XML parser");
    XML_SetUserData(p.get(), &b);
    XML_SetElementHandler(p.get(), on_start, on_end);
    XML_SetCharacterDataHandler(p.get(), on_chars);
    // Feed in chunks; XML_Parse takes an int length.
    constexpr std::size_t kChunk = 1 << 24;
    std::size_t off = 0;
    do {
        std::size_t len = std::min(kChunk, xml.size() - off);
        bool last = off + len == xml.size();
        if (XML_Parse(p.get(), xml.data() + off, static_cast<int>(len), last) == XML_STATUS_ERROR)
            throw ParseError(XML_ErrorString(XML_GetErrorCode(p.get())),
                             static_cast<int>(XML_GetCurrentLineNumber(p.get())),
                             static_cast<int>(XML_GetCurrentColumnNumber(p.get())) + 1);
        off += len;
    } while (off < xml.size());
    b.finish();
    return d;
}

Document Document::parse_file(const std::filesystem::path& path) { return parse(read_file(path)); }

const std::string* Document::attribute(NodeId n, std::string_view name) const {
    for (const auto& a : attributes(n))
        if (a.name == name) return &a.value;
    return nullptr;
}

std::string Document::path(NodeId n) const {
    std::vector<std::string> parts;
    for (NodeId cur = n; cur != 0; cur = parent_[cur]) {
        NodeId p = parent_[cur];
        if (p == 0) {
            parts.push_back("/" + name(cur));
            break;
        }
        int index = 1;
        for (NodeId sib : element_children(p)) {
            if (sib == cur) break;
            if (name_[sib] == name_[cur]) ++index;
        }
        parts.push_back("/" + name(cur) + "[" + std::to_string(index) + "]");
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out += *it;
    return out;
}

bool Document::deep_equal(NodeId a, NodeId b) const {
    if (a == b) return true;
    if (kind_[a] != kind_[b]) return false;
    if (kind_[a] == Kind::Text) return string_value(a) == string_value(b);
    if (name_[a] != name_[b]) return false;
    auto aa = attributes(a), ba = attributes(b);
    if (aa.size() != ba.size()) return false;
    for (const auto& x : aa) {
        const std::string* v = attribute(b, x.name);
        if (!v || *v != x.value) return false;
    }
    auto ac = children(a), bc = children(b);
    if (ac.size() != bc.size()) return false;
    for (std::size_t i = 0; i < ac.size(); ++i)
        if (!deep_equal(ac[i], bc[i])) return false;
    return true;
}

}  // namespace dqp
