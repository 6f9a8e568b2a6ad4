#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/error.hpp"

namespace lcforge {

namespace detail {

struct LocaleNames {
    std::string_view locale;
    std::string_view country;
    std::vector<std::string_view> names;
};

inline const std::vector<LocaleNames>& name_tables() {
    static const std::vector<LocaleNames> tables = {
        {"fr_FR", "France",
         {"Élodie Moreau", "Monsieur Dupont", "Camille Laurent", "Julien Bernard", "Chloé Lefèvre", "Antoine Girard",
          "Manon Rousseau", "Hugo Fontaine", "Léa Mercier", "Mathieu Chevalier", "Inès Garnier", "Nicolas Faure",
          "Sophie Lambert", "Thomas Bonnet", "Amélie Dubois", "Lucas Martin", "Claire Fournier", "Pierre Lemoine",
          "Margaux Perrin", "Madame Rivière", "Baptiste Roux", "Océane Blanc"}},
        {"en_IN", "India",
         {"Ananya Sharma", "Mr. Rajesh Iyer", "Priya", "Vikram Nair", "Sneha Reddy", "Arjun Mehta", "Kavya Menon",
          "Rohan Gupta", "Meera Pillai", "Aditya Rao", "Divya Krishnan", "Sanjay Patel", "Neha Joshi",
          "Karthik Subramanian", "Pooja Desai", "Rahul Verma", "Lakshmi Narayanan", "Amit Chatterjee",
          "Ishita Banerjee", "Mrs. Sunita Kulkarni", "Farhan Qureshi", "Nandini Bhat"}},
        {"en_GB", "United Kingdom",
         {"Liam", "Maya", "Mei", "Tariq", "Oliver Bennett", "Amelia Clarke", "Harry Whitfield", "Isla Morgan",
          "George Harrington", "Poppy Sinclair", "Charlotte Hughes", "Jack Fletcher", "Eleanor Price", "Samuel Ashworth",
          "Grace Holloway", "Mr. Edward Thornton", "Ruby Caldwell", "Aisha Rahman", "Thomas Pemberton", "Freya Lawson",
          "Callum Reid", "Hannah Whitaker"}},
        {"pt_BR", "Brazil",
         {"María", "João", "Carlos", "Ana Beatriz Souza", "Lucas Oliveira", "Fernanda Lima", "Rafael Costa",
          "Juliana Pereira", "Gabriel Almeida", "Camila Rodrigues", "Thiago Ferreira", "Larissa Carvalho",
          "Bruno Ribeiro", "Mariana Gomes", "Felipe Martins", "Beatriz Araújo", "Senhor Paulo Mendes", "Letícia Barbosa",
          "Gustavo Rocha", "Dona Helena Castro", "Vinícius Moreira", "Renata Cardoso"}},
        {"sw_KE", "Kenya",
         {"Mwangi", "Wanjiku", "Asha", "Otieno Odhiambo", "Achieng Atieno", "Kamau Njoroge", "Njeri Wambui",
          "Kipchoge Kiprono", "Chebet Jepkosgei", "Mutua Musyoka", "Mwende Nduta", "Omondi Ochieng", "Akinyi Adhiambo",
          "Baraka Kariuki", "Zawadi Mumbua", "Juma Hassan", "Halima Abdi", "Kiprop Rotich", "Nafula Wekesa",
          "Bwana Onyango", "Imani Wairimu", "Makena Gitau"}},
        {"de_DE", "Germany",
         {"Lukas Schneider", "Anna Müller", "Jonas Fischer", "Lea Weber", "Maximilian Wagner", "Sophie Becker",
          "Felix Hoffmann", "Marie Schulz", "Leon Koch", "Johanna Richter", "Paul Klein", "Laura Wolf",
          "Herr Schröder", "Frau Neumann", "Tim Schwarz", "Hannah Zimmermann", "Niklas Braun", "Lena Krüger",
          "David Hofmann", "Clara Hartmann", "Moritz Lange", "Emilia Werner"}},
    };
    return tables;
}

inline const LocaleNames& locale_table(std::string_view locale) {
    for (const auto& t : name_tables()) {
        if (t.locale == locale) return t;
    }
    throw UnknownLocale(std::string(locale));
}

}  // namespace detail

inline std::vector<std::string> supported_locales() {
    std::vector<std::string> out;
    for (const auto& t : detail::name_tables()) out.emplace_back(t.locale);
    return out;
}

inline const std::vector<std::string_view>& locale_names(std::string_view locale) {
    return detail::locale_table(locale).names;
}

inline std::string locale_country(std::string_view locale) { return std::string(detail::locale_table(locale).country); }

/// The first name is always the user; the rest are assistant-1, assistant-2, ...
struct Participants {
    std::string user_name;
    std::vector<std::string> assistant_names;

    std::vector<std::string> all() const {
        std::vector<std::string> out{user_name};
        out.insert(out.end(), assistant_names.begin(), assistant_names.end());
        return out;
    }

    friend bool operator==(const Participants&, const Participants&) = default;
};

inline Participants generate_participants(std::string_view locale, int n_assistants, std::uint64_t rng_seed) {
    if (n_assistants < 1) throw ConfigError("n_assistants must be >= 1");
    const auto& table = detail::locale_table(locale).names;
    const auto need = static_cast<std::size_t>(n_assistants) + 1;
    if (need > table.size()) {
        throw ConfigError("locale " + std::string(locale) + " has only " + std::to_string(table.size()) + " names");
    }
    Rng rng(derive_seed(rng_seed, "participants"));
    const auto picks = rng.sample_indices(table.size(), need);
    Participants p;
    p.user_name = std::string(table[picks[0]]);
    for (std::size_t i = 1; i < picks.size(); ++i) p.assistant_names.emplace_back(table[picks[i]]);
    return p;
}

}  // namespace lcforge
