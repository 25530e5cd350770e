#include "subrad/sign_pattern.hpp"

#include <algorithm>

#include "subrad/core.hpp"

namespace subrad {

std::string part_label(std::size_t index) {
    std::string s;
    ++index;
    while (index > 0) {
        --index;
        s.insert(s.begin(), static_cast<char>('A' + index % 26));
        index /= 26;
    }
    return s;
}

SignPattern::SignPattern(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    for (auto s : signs_)
        if (s != 1 && s != -1) throw PreconditionError("SignPattern entries must be +1 or -1");
}

SignPattern SignPattern::all_plus(std::size_t parts) {
    return SignPattern(std::vector<std::int8_t>(parts, 1));
}

SignPattern SignPattern::parse(std::string_view text) {
    std::vector<std::int8_t> s;
    for (char ch : text) {
        if (ch == '+') s.push_back(1);
        else if (ch == '-') s.push_back(-1);
        else if (ch == ',' || ch == ' ') continue;
        else throw PreconditionError("SignPattern: unexpected character '" + std::string(1, ch) + "'");
    }
    if (s.empty()) throw PreconditionError("SignPattern: empty pattern");
    return SignPattern(std::move(s));
}

SignPattern SignPattern::from_flips(std::size_t parts, std::string_view labels) {
    std::vector<std::int8_t> s(parts, 1);
    std::size_t pos = 0;
    while (pos < labels.size()) {
        if (labels[pos] == ',' || labels[pos] == ' ') {
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < labels.size() && labels[end] >= 'A' && labels[end] <= 'Z') ++end;
        if (end == pos) throw PreconditionError("SignPattern: bad part label in '" + std::string(labels) + "'");
        // Single letters up to 26 parts; beyond that labels are comma separated.
        std::size_t take = parts <= 26 ? 1 : end - pos;
        const std::string label(labels.substr(pos, take));
        bool found = false;
        for (std::size_t i = 0; i < parts; ++i) {
            if (part_label(i) == label) {
                s[i] = static_cast<std::int8_t>(-s[i]);
                found = true;
                break;
            }
        }
        if (!found) throw PreconditionError("SignPattern: unknown part '" + label + "'");
        pos += take;
    }
    return SignPattern(std::move(s));
}

std::string SignPattern::str() const {
    std::string out;
    out.reserve(signs_.size());
    for (auto s : signs_) out.push_back(s > 0 ? '+' : '-');
    return out;
}

std::string SignPattern::flip_labels() const {
    std::string out;
    for (std::size_t i = 0; i < signs_.size(); ++i)
        if (signs_[i] < 0) out += part_label(i);
    return out;
}

bool SignPattern::is_all_plus() const {
    return std::all_of(signs_.begin(), signs_.end(), [](auto s) { return s == 1; });
}

bool SignPattern::is_uniform() const {
    return std::all_of(signs_.begin(), signs_.end(), [&](auto s) { return s == signs_.front(); });
}

int SignPattern::dot(const SignPattern& o) const {
    if (o.size() != size()) throw PreconditionError("SignPattern: length mismatch");
    int acc = 0;
    for (std::size_t i = 0; i < size(); ++i) acc += signs_[i] * o.signs_[i];
    return acc;
}

SignPattern SignPattern::operator*(const SignPattern& o) const {
    if (o.size() != size()) throw PreconditionError("SignPattern: length mismatch");
    std::vector<std::int8_t> s(size());
    for (std::size_t i = 0; i < size(); ++i) s[i] = static_cast<std::int8_t>(signs_[i] * o.signs_[i]);
    return SignPattern(std::move(s));
}

SignPattern SignPattern::operator-() const {
    std::vector<std::int8_t> s(signs_);
    for (auto& x : s) x = static_cast<std::int8_t>(-x);
    return SignPattern(std::move(s));
}

}  // namespace subrad
