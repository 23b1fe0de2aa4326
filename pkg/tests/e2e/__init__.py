# End-to-end tests - Complete user journeys
