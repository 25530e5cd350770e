#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "subrad/dynamics.hpp"
#include "subrad/schedule.hpp"
#include "subrad/storage.hpp"

namespace subrad {

// All exported numbers carry 12 significant digits.
double round_sig(double x, int digits = 12);
std::string format_number(double x);
// Rounds every floating-point value of a document in place.
void round_numbers(nlohmann::json& doc);

nlohmann::json plan_to_json(const PulsePlan& plan);
PulsePlan plan_from_json(const nlohmann::json& doc);

// Columns t, Re F_in, Im F_in, Re c, Im c, Re F_out, Im F_out. Segments are
// written one after the other, so a pulse boundary appears twice (left and
// right limits).
std::string trajectory_table(const std::vector<Segment>& segments);
std::string trajectory_table(const WavePacket& f_in, const AmplitudeTrajectory& traj,
                             const WavePacket& f_out);

// Whitespace-separated "t re [im]" lines on a uniform grid; '#' starts a
// comment. Throws ConfigError for missing, empty or non-uniform files.
WavePacket read_samples_file(const std::filesystem::path& path);

// Throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace subrad
