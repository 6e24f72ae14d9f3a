// Copyright 2026 The Textanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textanon/synthetic.hpp"

#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "json.hpp"

namespace textanon {
namespace {

constexpr const char* kMaleNames[] = {
    "John",   "Henry",  "Arthur", "Walter", "Samuel", "Edward", "Frank",
    "Albert", "Harold", "Oscar",  "Victor", "Leon",   "Felix",  "Hugo",
    "Martin", "Simon",  "Daniel", "Lucas",  "Adrian", "Julian", "Roland",
    "Conrad", "Philip", "Bernard", "Gordon", "Stanley", "Ernest", "Louis",
    "Robert", "Thomas"};
constexpr const char* kFemaleNames[] = {
    "Mary",    "Alice",  "Clara",  "Edith",   "Helen",  "Irene",   "Louise",
    "Martha",  "Nora",   "Olive",  "Rose",    "Ruth",   "Sylvia",  "Vera",
    "Agnes",   "Beatrice", "Cecilia", "Dorothy", "Eleanor", "Frances", "Grace",
    "Hazel",   "Ida",    "Julia",  "Lillian", "Mabel",  "Pauline", "Stella",
    "Laura",   "Emma"};
constexpr const char* kCities[] = {
    "London",   "Paris",    "Berlin",  "Vienna",   "Dublin",   "Boston",
    "Chicago",  "Toronto",  "Sydney",  "Lisbon",   "Oslo",     "Prague",
    "Madrid",   "Glasgow",  "Leeds",   "Bristol",  "Hamburg",  "Munich",
    "Zurich",   "Geneva",   "Lyon",    "Milan",    "Naples",   "Seville",
    "Krakow",   "Riga",     "Tallinn", "Bergen",   "Malmo",    "Antwerp",
    "Ghent",    "Porto",    "Turin",   "Denver",   "Seattle",  "Portland",
    "Halifax",  "Quebec",   "Perth",   "Adelaide"};
constexpr const char* kNationalities[] = {
    "English", "French",   "German",   "Austrian", "Irish",   "American",
    "Canadian", "Australian", "Portuguese", "Norwegian", "Czech", "Spanish",
    "Scottish", "Swiss",   "Italian",  "Polish"};
constexpr const char* kOccupations[] = {
    "writer",    "painter",   "architect", "composer",  "physician",
    "journalist", "engineer", "historian", "sculptor",  "poet",
    "botanist",  "chemist",   "economist", "photographer", "actor",
    "novelist",  "diplomat",  "lawyer",    "astronomer", "geologist",
    "violinist", "pianist",   "cartographer", "publisher", "teacher"};
constexpr const char* kWorkAdjectives[] = {
    "Silent", "Northern", "Broken", "Golden", "Hidden", "Winter", "Distant",
    "Crimson", "Quiet",  "Last",   "Empty",  "Bright", "Wandering", "Lost",
    "Hollow", "Burning", "Patient", "Careful", "Second", "Open"};
constexpr const char* kWorkNouns[] = {
    "Harbor", "Garden", "River",  "Tower",  "Letters", "Season", "Orchard",
    "Bridge", "Lantern", "Valley", "Mirror", "Voyage",  "Archive", "Shore",
    "Meadow", "Compass", "Station", "Window", "Forest", "Chorus"};
constexpr const char* kCompanies[] = {
    "Halvers",  "Brightwell", "Ostmark", "Carrow",   "Dunmore",  "Ellison",
    "Fairbank", "Greystone",  "Holloway", "Ironside", "Jarrow",  "Kestrel",
    "Lockhart", "Marlowe",    "Northcote", "Oakridge", "Pemberton", "Quarry",
    "Redfern",  "Stanmore",   "Thornton", "Underhill", "Vantage",  "Westbrook",
    "Yardley",  "Ashcombe",   "Blakemore", "Coldwell", "Denholm",  "Eastleigh"};
constexpr const char* kCompanySuffixes[] = {"Press", "Studios", "Institute",
                                            "Works", "Gallery", "Society"};
constexpr const char* kSpouseSurnames[] = {
    "Smith", "Brown", "Taylor", "Wilson", "Clarke", "Wright", "Walker", "Hall",
    "Green", "Baker", "Hill",   "Cooper", "Ward",   "Moore",  "King",   "Lee"};
constexpr const char* kMonths[] = {"January", "February", "March",    "April",
                                   "May",     "June",     "July",     "August",
                                   "September", "October", "November", "December"};
constexpr const char* kCounts[] = {"two", "three", "four", "five"};

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                   "p", "r", "s", "t", "v", "z", "br", "dr",
                                   "gr", "st", "th", "kl"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ae", "ou", "ei"};
constexpr const char* kCodas[] = {"", "n", "r", "s", "k", "l", "th", "nd", "rk"};

template <typename T, std::size_t N>
const T& Pick(std::mt19937_64& rng, const T (&arr)[N]) {
  std::uniform_int_distribution<std::size_t> d(0, N - 1);
  return arr[d(rng)];
}

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool Coin(std::mt19937_64& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

std::string UniqueSurname(std::mt19937_64& rng, std::set<std::string>& used) {
  while (true) {
    std::string s;
    const int syllables = Uniform(rng, 2, 3);
    for (int i = 0; i < syllables; ++i) {
      s += Pick(rng, kOnsets);
      s += Pick(rng, kVowels);
    }
    s += Pick(rng, kCodas);
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    if (used.insert(s).second) return s;
  }
}

std::string Article(const std::string& word) {
  const char c = word.empty() ? 'x' : static_cast<char>(std::tolower(word[0]));
  return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an" : "a";
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

std::string GenerateSyntheticCorpus(const SyntheticOptions& options) {
  std::mt19937_64 rng(options.seed * 0x2545F4914F6CDD1DULL + 17);
  std::set<std::string> used;
  std::string out;
  for (std::size_t i = 0; i < options.records; ++i) {
    const bool female = Coin(rng, 0.5);
    const std::string first = female ? Pick(rng, kFemaleNames) : Pick(rng, kMaleNames);
    const std::string last = UniqueSurname(rng, used);
    const std::string he = female ? "she" : "he";
    const std::string his = female ? "her" : "his";
    const int day = Uniform(rng, 1, 28);
    const std::string month = Pick(rng, kMonths);
    const int year = Uniform(rng, 1900, 1985);
    const std::string city = Pick(rng, kCities);
    std::string city2 = Pick(rng, kCities);
    while (city2 == city) city2 = Pick(rng, kCities);
    const std::string nationality = Pick(rng, kNationalities);
    const std::string occupation = Pick(rng, kOccupations);
    const std::string work =
        std::string("The ") + Pick(rng, kWorkAdjectives) + " " + Pick(rng, kWorkNouns);
    const std::string company =
        std::string(Pick(rng, kCompanies)) + " " + Pick(rng, kCompanySuffixes);
    const bool married = Coin(rng, 0.5);
    const std::string spouse = married ? std::string(female ? Pick(rng, kMaleNames)
                                                            : Pick(rng, kFemaleNames)) +
                                             " " + Pick(rng, kSpouseSurnames)
                                       : "";
    const std::string date =
        std::to_string(day) + " " + month + " " + std::to_string(year);

    std::vector<std::string> sentences;
    if (Coin(rng, 0.5)) {
      sentences.push_back(first + " " + last + " (born " + date + ") is " +
                          Article(nationality) + " " + nationality + " " +
                          occupation + ".");
    } else {
      sentences.push_back(first + " " + last + " is " + Article(nationality) + " " +
                          nationality + " " + occupation + ", born on " + date +
                          ".");
    }
    if (Coin(rng, 0.5)) {
      sentences.push_back(Capitalize(he) + " was born in " + city +
                          " and grew up in " + city2 + ".");
    } else {
      sentences.push_back("Born in " + city + ", " + he + " moved to " + city2 +
                          " as a child.");
    }
    if (Coin(rng, 0.5)) {
      sentences.push_back(Capitalize(he) + " is best known for " + work + ".");
    } else {
      sentences.push_back(Capitalize(his) + " most famous work is " + work + ".");
    }
    if (Coin(rng, 0.7)) {
      const int start = year + Uniform(rng, 20, 30);
      const int end = start + Uniform(rng, 3, 15);
      sentences.push_back(Capitalize(he) + " worked for " + company + " from " +
                          std::to_string(start) + " to " + std::to_string(end) + ".");
    }
    if (married) {
      sentences.push_back(Capitalize(he) + " married " + spouse + " in " +
                          std::to_string(year + Uniform(rng, 20, 35)) + ".");
    }
    if (Coin(rng, 0.5)) {
      sentences.push_back(Capitalize(he) + " has " + Pick(rng, kCounts) +
                          " children.");
    }
    if (Coin(rng, 0.6)) {
      constexpr const char* kFiller[] = {
          "Early reviews of the work were mixed.",
          "In later life HE taught at a local school.",
          "HIS early work received little attention.",
          "HE retired from public life in old age.",
          "HE travelled widely and wrote many letters.",
          "Critics later praised HIS careful style.",
      };
      std::string f = Pick(rng, kFiller);
      for (auto [from, to] : {std::pair<std::string, std::string>{"HE", he},
                              {"HIS", his}}) {
        for (std::size_t p = f.find(from); p != std::string::npos; p = f.find(from)) {
          f.replace(p, from.size(), p == 0 ? Capitalize(to) : to);
        }
      }
      sentences.push_back(f);
    }
    std::string document;
    for (const auto& s : sentences) {
      if (!document.empty()) document += ' ';
      document += s;
    }

    nlohmann::ordered_json profile = nlohmann::ordered_json::array();
    profile.push_back({"name", first + " " + last});
    profile.push_back({"birth_date", date});
    profile.push_back({"birth_place", city});
    profile.push_back({"nationality", nationality});
    profile.push_back({"occupation", occupation});
    profile.push_back({"known_for", work});
    if (married) profile.push_back({"spouse", spouse});

    char id[32];
    std::snprintf(id, sizeof(id), "p%04zu", i);
    nlohmann::ordered_json line;
    line["id"] = id;
    line["document"] = document;
    line["profile"] = profile;
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace textanon
