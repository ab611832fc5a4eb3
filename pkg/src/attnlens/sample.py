"""Bundled sample text for the demo UI and CLI smoke runs."""

SAMPLE_TEXT = (
    "sebastian vettel is determined to ensure the return of a long-standing "
    "ritual at ferrari is not a one-off this season . fresh from ferrari's first "
    "victory in 35 grands prix in malaysia 11 days ago, and ending his own "
    "20-race drought, vettel returned to a hero's welcome at the team's factory "
    "at maranello last week . the win allowed ferrari to revive a tradition not "
    "seen at their base for almost two years since their previous triumph in may "
    "2013 at the spanish grand prix courtesy of fernando alonso . sebastian "
    "vettel reflected on his stunning win for ferrari at the malaysian grand prix "
    "during the press conference before the weekend's chinese grand prix in "
    "shanghai the four-time world champion shares a friendly discussion with "
    "mclaren star jenson button four-times world champion vettel said: 'it was a "
    "great victory we had in malaysia, great for us as a team, and for myself a "
    "very emotional day - my first win with ferrari . when i returned to the "
    "factory on wednesday, to see all the people there was quite special . there "
    "are a lot of people working there and as you can imagine they were very, "
    "very happy . the team hadn't won for quite a while, so they enjoyed the fact "
    "they had something to celebrate . there were a couple of rituals involved, "
    "so it was nice for them to get that feeling again .' asked as to the "
    "specific nature of the rituals, vettel replied: 'i was supposed to be there "
    "for simulator work anyway, but it was quite nice to receive the welcome "
    "after the win . ferrari's vettel and britta roeske arrive at the shanghai "
    "circuit along with a ferrari mechanic, vettel caught up with members of his "
    "old team red bull on thursday 'all the factory got together for a quick "
    "lunch . it was quite nice to have all the people together in one room - it "
    "was a big room! - so we were able to celebrate altogether for a bit . 'i "
    "also learned when you win with ferrari, at the entry gate, they raise a "
    "ferrari flag - and obviously it's been a long time since they last did that "
    ". 'some 10 years ago there were a lot of flags, especially at the end of a "
    "season, so this flag will stay there for the rest of the"
)
