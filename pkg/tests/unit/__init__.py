# Unit tests - Domain logic and business rules
