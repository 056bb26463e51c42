#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace hetlb {

/// String identifier tagged by the kind of entity it names, so a job id can
/// never be passed where a server id is expected.
template <class Tag>
class Id {
public:
    Id() = default;
    explicit Id(std::string value) : value_(std::move(value)) {}
    explicit Id(std::string_view value) : value_(value) {}
    explicit Id(const char* value) : value_(value) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const Id&, const Id&) = default;
    friend bool operator==(const Id&, const Id&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Id& id) {
        return os << id.value_;
    }

private:
    std::string value_;
};

struct JobTag {};
struct ServerTag {};
struct ClusterTag {};

using JobId = Id<JobTag>;
using ServerId = Id<ServerTag>;
using ClusterId = Id<ClusterTag>;

/// Identifiers appear verbatim in scenario files and trace lines, so they are
/// restricted to characters that need no quoting: [A-Za-z0-9_.-], non-empty.
bool is_valid_identifier(std::string_view text) noexcept;

} // namespace hetlb

template <class Tag>
struct std::hash<hetlb::Id<Tag>> {
    std::size_t operator()(const hetlb::Id<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
