#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace dqp {

// Opaque pattern-scoped identifier. The tag keeps element ids from being
// passed where relation ids are expected.
template <class Tag>
class Id {
public:
    Id() = default;
    explicit Id(std::string value) : value_(std::move(value)) {}

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const Id&) const = default;

private:
    std::string value_;
};

struct GraphTag;
struct ElementTag;
struct RelationTag;
struct PropertyTag;
struct OperatorTag;
struct ParameterTag;

using GraphId = Id<GraphTag>;
using ElementId = Id<ElementTag>;
using RelationId = Id<RelationTag>;
using PropertyId = Id<PropertyTag>;
using OperatorId = Id<OperatorTag>;
using ParameterId = Id<ParameterTag>;

// Copyable owning pointer used to make the condition tree a plain value type.
template <class T>
class Box {
public:
    Box() : ptr_(std::make_unique<T>()) {}
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&& other) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&& other) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    bool operator==(const Box& other) const { return *ptr_ == *other.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

}  // namespace dqp

template <class Tag>
struct std::hash<dqp::Id<Tag>> {
    std::size_t operator()(const dqp::Id<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
