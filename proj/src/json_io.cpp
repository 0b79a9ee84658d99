namespace homcube {}
