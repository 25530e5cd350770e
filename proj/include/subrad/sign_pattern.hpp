#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace subrad {

// Spatial part labels A, B, ..., Z, AA, AB, ...
std::string part_label(std::size_t index);

// Phase (+1 / -1) assigned to each spatial part of the sample.
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::vector<std::int8_t> signs);

    static SignPattern all_plus(std::size_t parts);
    // "+-+-" style; throws PreconditionError on any other character.
    static SignPattern parse(std::string_view text);
    // Parts whose phase is flipped, by label: from_flips(4, "BD") == "+-+-".
    static SignPattern from_flips(std::size_t parts, std::string_view labels);

    std::size_t size() const { return signs_.size(); }
    int operator[](std::size_t i) const { return signs_[i]; }
    const std::vector<std::int8_t>& signs() const { return signs_; }

    std::string str() const;          // "+-+-"
    std::string flip_labels() const;  // "BD"

    bool is_all_plus() const;
    // True for the all-plus pattern and its negation (the superradiant mode).
    bool is_uniform() const;
    int dot(const SignPattern& o) const;

    SignPattern operator*(const SignPattern& o) const;  // elementwise product
    SignPattern operator-() const;
    bool operator==(const SignPattern& o) const = default;

private:
    std::vector<std::int8_t> signs_;
};

}  // namespace subrad
